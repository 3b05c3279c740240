#include <CLI11.hpp>

#include "osctrig/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Stochastic trigonometric integrator for forced oscillators"};
    app.require_subcommand(1);

    std::string config_path;
    osctrig::cli::IntegrateOverrides ov;
    std::string method, output;
    double h = 0.0;
    std::uint64_t seed = 0, sample = 0;

    auto* integrate = app.add_subcommand("integrate", "Write a (t, x, v) trajectory CSV");
    integrate->set_help_flag("--help", "print help");
    integrate->add_option("config", config_path, "JSON config file")->required();
    auto* opt_method = integrate->add_option("--method", method, "filon|lobatto|trapezoid");
    auto* opt_h = integrate->add_option("--h", h, "step size override");
    auto* opt_seed = integrate->add_option("--seed", seed, "RNG seed override");
    auto* opt_sample = integrate->add_option("--sample", sample, "sample index for the noise path");
    auto* opt_out = integrate->add_option("--output", output, "output CSV path override");

    std::size_t samples = 0;
    std::string se_output;
    auto* strong = app.add_subcommand("strong-error", "Run the Monte Carlo strong-error report");
    strong->add_option("config", config_path, "JSON config file")->required();
    auto* opt_samples = strong->add_option("--samples", samples, "sample count override");
    auto* opt_se_out = strong->add_option("--output", se_output, "output CSV path override");

    double k = 40.0;
    int nodes = 5;
    std::string family;
    auto* qc = app.add_subcommand("quadrature-check", "Per-rule errors against an oracle");
    qc->add_option("--k", k, "kernel frequency");
    qc->add_option("--nodes", nodes, "node count");
    qc->add_option("--family", family, "constant|linear|quadratic|cubic|cos3x")->required();

    CLI11_PARSE(app, argc, argv);

    if (integrate->parsed()) {
        if (*opt_method) ov.method = method;
        if (*opt_h) ov.h = h;
        if (*opt_seed) ov.seed = seed;
        if (*opt_sample) ov.sample = sample;
        if (*opt_out) ov.output = output;
        return osctrig::cli::cmd_integrate(config_path, ov);
    }
    if (strong->parsed()) {
        return osctrig::cli::cmd_strong_error(
            config_path,
            *opt_samples ? std::optional<std::size_t>(samples) : std::nullopt,
            *opt_se_out ? std::optional<std::string>(se_output) : std::nullopt);
    }
    return osctrig::cli::cmd_quadrature_check(k, nodes, family);
}
