#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "osctrig/filon.hpp"
#include "osctrig/problem.hpp"

namespace osctrig {

/// Exact flow of the linear oscillator: R(t*omega) = [[c, s/w], [-w*s, c]].
struct RotationMatrix {
    double c = 1.0;
    double s = 0.0;
    double omega = 1.0;

    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << c, s / omega, -omega * s, c;
        return m;
    }
};

inline RotationMatrix rotation(double omega, double t) {
    if (!(omega > 0.0)) throw std::invalid_argument("rotation: omega must be positive");
    return {std::cos(t * omega), std::sin(t * omega), omega};
}

enum class KernelMode { QuadratureKernel, ExactTrigKernel };

namespace detail {

// ∫_a^b sin(phase - mu*s) ds and the cosine analogue. For |mu|*(b-a) tiny the
// antiderivative cancels; the midpoint value is exact to O((mu*(b-a))^2).
inline double integral_sin_phase(double phase, double mu, double a, double b) {
    if (std::abs(mu) * (b - a) < 1e-9) return (b - a) * std::sin(phase - mu * (a + b) / 2);
    return (std::cos(phase - mu * b) - std::cos(phase - mu * a)) / mu;
}

inline double integral_cos_phase(double phase, double mu, double a, double b) {
    if (std::abs(mu) * (b - a) < 1e-9) return (b - a) * std::cos(phase - mu * (a + b) / 2);
    return (std::sin(phase - mu * b) - std::sin(phase - mu * a)) / (-mu);
}

// Closed-form (I_sin, I_cos) for a trig-sum forcing via product-to-sum
// identities; with X = (t1-s)*w, Y = nu*s the phases are w*t1 - (w -+ nu)*s.
inline std::pair<double, double> exact_trig_integrals(const Forcing& f, double w, double t0,
                                                      double t1) {
    double is = 0.0, ic = 0.0;
    const double ph = w * t1;
    for (const auto& term : f.terms()) {
        const double nu = term.frequency;
        const double half = term.amplitude / 2;
        const double mm = w - nu, mp = w + nu;
        if (term.phase == TrigPhase::Cosine) {
            is += half * (integral_sin_phase(ph, mm, t0, t1) + integral_sin_phase(ph, mp, t0, t1));
            ic += half * (integral_cos_phase(ph, mm, t0, t1) + integral_cos_phase(ph, mp, t0, t1));
        } else {
            is += half * (integral_cos_phase(ph, mp, t0, t1) - integral_cos_phase(ph, mm, t0, t1));
            ic += half * (integral_sin_phase(ph, mm, t0, t1) - integral_sin_phase(ph, mp, t0, t1));
        }
    }
    return {is, ic};
}

}  // namespace detail

/// One-step scheme: exact rotation of the linear part, quadrature (or closed
/// form) of the forcing integrals, additive noise increment. Deterministic
/// step integrals depend only on (forcing, omega, h, rule) and are computed
/// once per scheme, not per trajectory.
class StepScheme {
public:
    StepScheme(OscillatorProblem problem, double h, QuadratureRule rule,
               KernelMode kernel_mode = KernelMode::QuadratureKernel)
        : problem_(std::move(problem)), h_(h), rule_(rule), kernel_mode_(kernel_mode) {
        problem_.validate();
        if (!(h > 0.0)) throw std::invalid_argument("StepScheme: h must be positive");
        const double steps = problem_.t_end / h;
        n_steps_ = static_cast<std::size_t>(std::llround(steps));
        if (n_steps_ == 0 || std::abs(steps - static_cast<double>(n_steps_)) > 1e-9 * steps)
            throw std::invalid_argument("StepScheme: h must divide t_end");
        if (kernel_mode_ == KernelMode::ExactTrigKernel && !problem_.forcing.is_trig_sum())
            throw std::invalid_argument("StepScheme: exact kernel requires TrigSum forcing");
        cos_hw_ = std::cos(h_ * problem_.omega);
        sin_hw_ = std::sin(h_ * problem_.omega);
        integrals_.reserve(n_steps_);
        for (std::size_t n = 0; n < n_steps_; ++n)
            integrals_.push_back(compute_step_integrals(static_cast<double>(n) * h_));
    }

    const OscillatorProblem& problem() const { return problem_; }
    double h() const { return h_; }
    std::size_t n_steps() const { return n_steps_; }
    const QuadratureRule& rule() const { return rule_; }
    KernelMode kernel_mode() const { return kernel_mode_; }
    double cos_hw() const { return cos_hw_; }
    double sin_hw() const { return sin_hw_; }

    /// (I_sin, I_cos) over [t_n, t_n + h] for the kernels sin((t_{n+1}-s)w),
    /// cos((t_{n+1}-s)w) against g.
    std::pair<double, double> compute_step_integrals(double t_n) const {
        const double w = problem_.omega;
        const double t1 = t_n + h_;
        const Forcing& g = problem_.forcing;
        switch (kernel_mode_ == KernelMode::ExactTrigKernel ? RuleTag::FilonSine : rule_.tag) {
            case RuleTag::FilonSine:
            case RuleTag::FilonCosine: {
                if (kernel_mode_ == KernelMode::ExactTrigKernel)
                    return detail::exact_trig_integrals(g, w, t_n, t1);
                // angle-addition split: one pair of fixed-k Filon integrals
                const double C = filon_cosine(g, t_n, t1, w, rule_.node_count);
                const double S = filon_sine(g, t_n, t1, w, rule_.node_count);
                const double s1 = std::sin(w * t1), c1 = std::cos(w * t1);
                return {s1 * C - c1 * S, c1 * C + s1 * S};
            }
            case RuleTag::Lobatto5:
                return {lobatto5([&](double s) { return std::sin((t1 - s) * w) * g(s); }, t_n, t1),
                        lobatto5([&](double s) { return std::cos((t1 - s) * w) * g(s); }, t_n, t1)};
            case RuleTag::Trapezoid:
                return {trapezoid([&](double s) { return std::sin((t1 - s) * w) * g(s); }, t_n, t1,
                                  rule_.node_count),
                        trapezoid([&](double s) { return std::cos((t1 - s) * w) * g(s); }, t_n, t1,
                                  rule_.node_count)};
        }
        throw std::logic_error("StepScheme: unknown rule");
    }

    std::pair<double, double> step_integrals(std::size_t n) const { return integrals_.at(n); }

private:
    OscillatorProblem problem_;
    double h_;
    QuadratureRule rule_;
    KernelMode kernel_mode_;
    std::size_t n_steps_ = 0;
    double cos_hw_ = 1.0, sin_hw_ = 0.0;
    std::vector<std::pair<double, double>> integrals_;
};

inline std::pair<double, double> deterministic_step_integrals(const StepScheme& scheme,
                                                              double t_n) {
    const double idx = t_n / scheme.h();
    const auto n = static_cast<std::size_t>(std::llround(idx));
    if (std::abs(idx - static_cast<double>(n)) > 1e-9 || n >= scheme.n_steps())
        throw std::invalid_argument("deterministic_step_integrals: t_n not on the mesh");
    return scheme.step_integrals(n);
}

/// One step of the scheme from `state` with Wiener increment dW.
inline State step(const StepScheme& scheme, const State& state, double dW) {
    const double idx = state.t / scheme.h();
    const auto n = static_cast<std::size_t>(std::llround(idx));
    if (std::abs(idx - static_cast<double>(n)) > 1e-9 || n >= scheme.n_steps())
        throw std::invalid_argument("step: state.t not on the mesh");
    const double w = scheme.problem().omega;
    const double eps = scheme.problem().epsilon;
    const double c = scheme.cos_hw(), s = scheme.sin_hw();
    const auto [i_sin, i_cos] = scheme.step_integrals(n);

    Eigen::Matrix2d rot;
    rot << c, s / w, -w * s, c;
    const Eigen::Vector2d next = rot * Eigen::Vector2d(state.x, state.v) +
                                 Eigen::Vector2d(i_sin / w, i_cos) +
                                 eps * dW * Eigen::Vector2d(s / w, c);
    State out{next(0), next(1), static_cast<double>(n + 1) * scheme.h()};
    out.check_finite();
    return out;
}

/// Full trajectory at t_0..t_N from the problem's initial state.
inline std::vector<State> integrate(const StepScheme& scheme,
                                    const std::vector<double>& increments) {
    if (increments.size() != scheme.n_steps())
        throw std::invalid_argument("integrate: increment count does not match mesh");
    std::vector<State> traj;
    traj.reserve(scheme.n_steps() + 1);
    traj.push_back({scheme.problem().x0, scheme.problem().v0, 0.0});
    for (std::size_t n = 0; n < scheme.n_steps(); ++n)
        traj.push_back(step(scheme, traj.back(), increments[n]));
    return traj;
}

}  // namespace osctrig
