#!/usr/bin/env python3
"""Log-log strong-error plot from a report CSV produced by `osctrig strong-error`."""
import argparse
import csv
from collections import defaultdict


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("report", help="report CSV path")
    ap.add_argument("-o", "--output", default=None, help="write PNG instead of showing")
    ap.add_argument("--channel", choices=["x", "v"], default="x")
    args = ap.parse_args()

    series = defaultdict(list)  # (method, omega) -> [(h, err, ci)]
    with open(args.report, newline="") as f:
        for row in csv.DictReader(f):
            key = (row["method"], float(row["omega"]))
            series[key].append(
                (float(row["h"]), float(row["err_" + args.channel]), float(row["ci_" + args.channel]))
            )

    import matplotlib

    if args.output:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    for (method, omega), pts in sorted(series.items()):
        pts.sort()
        h = [p[0] for p in pts]
        err = [p[1] for p in pts]
        ci = [p[2] for p in pts]
        label = f"{method}" + (f" (omega={omega:g})" if len({k[1] for k in series}) > 1 else "")
        ax.errorbar(h, err, yerr=ci, marker="o", capsize=3, label=label)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("h")
    ax.set_ylabel(f"strong error ({args.channel})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    if args.output:
        fig.savefig(args.output, dpi=150)
        print(f"wrote {args.output}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
