#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "osctrig/closed_form.hpp"
#include "osctrig/integrator.hpp"
#include "osctrig/wiener.hpp"

namespace osctrig {

inline std::string rule_name(RuleTag tag) {
    switch (tag) {
        case RuleTag::FilonSine:
        case RuleTag::FilonCosine: return "filon";
        case RuleTag::Lobatto5: return "lobatto";
        case RuleTag::Trapezoid: return "trapezoid";
    }
    return "?";
}

struct ExperimentConfig {
    OscillatorProblem problem;
    std::vector<QuadratureRule> methods;
    std::vector<double> step_sizes;
    std::size_t n_fine = 1 << 14;
    std::size_t samples = 500;
    std::uint64_t seed = 0;

    void validate() const {
        problem.validate();
        if (n_fine == 0 || (n_fine & (n_fine - 1)) != 0)
            throw std::invalid_argument("ExperimentConfig: n_fine must be a power of two");
        if (samples == 0) throw std::invalid_argument("ExperimentConfig: samples must be positive");
        if (methods.empty()) throw std::invalid_argument("ExperimentConfig: no methods");
        if (step_sizes.empty()) throw std::invalid_argument("ExperimentConfig: no step sizes");
        const double h_fine = problem.t_end / static_cast<double>(n_fine);
        for (double h : step_sizes) {
            if (!(h > 0.0)) throw std::invalid_argument("ExperimentConfig: nonpositive step size");
            const double steps = problem.t_end / h;
            if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
                throw std::invalid_argument("ExperimentConfig: step size must divide t_end");
            const double factor = h / h_fine;
            if (std::abs(factor - std::round(factor)) > 1e-9 * factor || factor < 1.0)
                throw std::invalid_argument(
                    "ExperimentConfig: step size must be a multiple of the fine step");
        }
    }
};

struct StrongErrorRow {
    std::string method;
    double omega = 0.0;
    double h = 0.0;
    double err_x = 0.0;
    double err_v = 0.0;
    double ci_x = 0.0;  // 95% half-width on err_x
    double ci_v = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double h_over_eps = 0.0;  // regime audit for the h/eps >= c0 condition
};

struct StrongErrorReport {
    std::vector<StrongErrorRow> rows;
    bool reference_filon_fallback = false;  // Callable forcing: no exact kernel
    std::size_t aborted_samples = 0;        // non-finite trajectories, never dropped silently
};

namespace detail {

inline unsigned worker_count() {
    if (const char* env = std::getenv("OSC_TRIG_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Final state only; avoids materializing fine-grid trajectories.
inline State integrate_final(const StepScheme& scheme, const std::vector<double>& increments) {
    if (increments.size() != scheme.n_steps())
        throw std::invalid_argument("integrate_final: increment count does not match mesh");
    State s{scheme.problem().x0, scheme.problem().v0, 0.0};
    for (std::size_t n = 0; n < scheme.n_steps(); ++n) s = step(scheme, s, increments[n]);
    return s;
}

inline StepScheme make_reference_scheme(const OscillatorProblem& problem, std::size_t n_fine,
                                        bool& filon_fallback) {
    const double h_fine = problem.t_end / static_cast<double>(n_fine);
    if (problem.forcing.is_trig_sum()) {
        filon_fallback = false;
        return StepScheme(problem, h_fine, {RuleTag::FilonSine, 5}, KernelMode::ExactTrigKernel);
    }
    filon_fallback = true;
    return StepScheme(problem, h_fine, {RuleTag::FilonSine, 5}, KernelMode::QuadratureKernel);
}

}  // namespace detail

/// Strong-error comparator: the scheme with exact deterministic integrals on
/// the fine grid, driven by the given path. Falls back to Filon quadrature for
/// callable forcings.
inline State reference_solution(const OscillatorProblem& problem, const WienerPath& path) {
    bool fallback = false;
    const StepScheme ref = detail::make_reference_scheme(problem, path.n_fine, fallback);
    return detail::integrate_final(ref, path.increments);
}

/// Monte Carlo strong errors at t_end: common fine path per sample, coarsened
/// to each step size; RMS over samples with 95% confidence half-widths.
/// Deterministic given the seed, independent of worker scheduling.
inline StrongErrorReport strong_error(const ExperimentConfig& config) {
    config.validate();
    const auto& problem = config.problem;
    const std::size_t n_cells = config.methods.size() * config.step_sizes.size();

    StrongErrorReport report;
    StepScheme ref = detail::make_reference_scheme(problem, config.n_fine,
                                                   report.reference_filon_fallback);

    std::vector<StepScheme> schemes;
    schemes.reserve(n_cells);
    for (const auto& method : config.methods)
        for (double h : config.step_sizes) schemes.emplace_back(problem, h, method);

    // per-sample squared errors; aggregated sequentially afterwards so the
    // result does not depend on the thread count
    const std::size_t M = config.samples;
    std::vector<double> sq_x(M * n_cells, 0.0), sq_v(M * n_cells, 0.0);
    std::vector<char> ok(M, 1);

    auto run_sample = [&](std::size_t m) {
        try {
            const WienerPath path = generate_path(config.seed, m, config.n_fine, problem.t_end);
            const State xr = detail::integrate_final(ref, path.increments);
            for (std::size_t c = 0; c < n_cells; ++c) {
                const StepScheme& sch = schemes[c];
                const auto coarse = coarsen(path, config.n_fine / sch.n_steps());
                const State xn = detail::integrate_final(sch, coarse);
                const double dx = xn.x - xr.x, dv = xn.v - xr.v;
                sq_x[m * n_cells + c] = dx * dx;
                sq_v[m * n_cells + c] = dv * dv;
            }
        } catch (const std::domain_error&) {
            ok[m] = 0;
        }
    };

    const unsigned workers = std::min<unsigned>(detail::worker_count(),
                                                static_cast<unsigned>(M));
    if (workers <= 1) {
        for (std::size_t m = 0; m < M; ++m) run_sample(m);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t m = w; m < M; m += workers) run_sample(m);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t m = 0; m < M; ++m)
        if (!ok[m]) ++report.aborted_samples;

    std::size_t c = 0;
    for (const auto& method : config.methods) {
        for (double h : config.step_sizes) {
            double sum_x = 0, sum_v = 0, sum_x2 = 0, sum_v2 = 0;
            std::size_t n = 0;
            for (std::size_t m = 0; m < M; ++m) {
                if (!ok[m]) continue;
                const double ex = sq_x[m * n_cells + c], ev = sq_v[m * n_cells + c];
                sum_x += ex;
                sum_v += ev;
                sum_x2 += ex * ex;
                sum_v2 += ev * ev;
                ++n;
            }
            StrongErrorRow row;
            row.method = rule_name(method.tag);
            row.omega = problem.omega;
            row.h = h;
            row.samples = n;
            row.seed = config.seed;
            row.h_over_eps = problem.epsilon > 0 ? h / problem.epsilon
                                                 : std::numeric_limits<double>::infinity();
            if (n > 0) {
                const double mean_x = sum_x / n, mean_v = sum_v / n;
                row.err_x = std::sqrt(mean_x);
                row.err_v = std::sqrt(mean_v);
                if (n > 1) {
                    // delta method: half-width of sqrt(mean of squares)
                    const double var_x = std::max(0.0, sum_x2 / n - mean_x * mean_x);
                    const double var_v = std::max(0.0, sum_v2 / n - mean_v * mean_v);
                    const double se_x = 1.96 * std::sqrt(var_x / n);
                    const double se_v = 1.96 * std::sqrt(var_v / n);
                    row.ci_x = row.err_x > 0 ? se_x / (2 * row.err_x) : 0.0;
                    row.ci_v = row.err_v > 0 ? se_v / (2 * row.err_v) : 0.0;
                }
            }
            report.rows.push_back(std::move(row));
            ++c;
        }
    }
    return report;
}

struct ConvergenceFit {
    std::string method;
    double slope = 0.0;               // least-squares slope of log(err) vs log(h)
    std::vector<double> log2_ratios;  // per-interval orders
    bool saturated = false;           // too few points above the error floor
};

/// Fit the position-error order for one method from a report; rows at or below
/// 10x `floor` are excluded.
inline ConvergenceFit convergence_order(const StrongErrorReport& report, const std::string& method,
                                        double floor = 0.0) {
    std::vector<std::pair<double, double>> pts;  // (h, err_x)
    for (const auto& row : report.rows)
        if (row.method == method && row.err_x > 10.0 * floor) pts.emplace_back(row.h, row.err_x);
    std::sort(pts.begin(), pts.end());

    ConvergenceFit fit;
    fit.method = method;
    if (pts.size() < 3) {
        fit.saturated = true;
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [h, e] : pts) {
        const double lx = std::log(h), ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(pts.size());
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    for (std::size_t i = 1; i < pts.size(); ++i)
        fit.log2_ratios.push_back(std::log2(pts[i].second / pts[i - 1].second) /
                                  std::log2(pts[i].first / pts[i - 1].first));
    return fit;
}

/// Strong position errors per omega at fixed h, same seeds across omega.
inline StrongErrorReport stiffness_sweep(OscillatorProblem problem,
                                         const std::vector<double>& omegas, double h,
                                         const std::vector<QuadratureRule>& methods,
                                         std::size_t n_fine, std::size_t samples,
                                         std::uint64_t seed) {
    StrongErrorReport out;
    for (double w : omegas) {
        ExperimentConfig cfg;
        cfg.problem = problem;
        cfg.problem.omega = w;
        cfg.methods = methods;
        cfg.step_sizes = {h};
        cfg.n_fine = n_fine;
        cfg.samples = samples;
        cfg.seed = seed;
        StrongErrorReport r = strong_error(cfg);
        out.reference_filon_fallback |= r.reference_filon_fallback;
        out.aborted_samples += r.aborted_samples;
        for (auto& row : r.rows) out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace osctrig
