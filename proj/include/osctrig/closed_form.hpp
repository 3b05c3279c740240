#pragma once

#include <cmath>
#include <stdexcept>

#include "osctrig/problem.hpp"

namespace osctrig {

struct ResonanceError : std::domain_error {
    using std::domain_error::domain_error;
};

// |nu - omega| below this is rejected: the particular solution divides by
// omega^2 - nu^2.
inline double resonance_tolerance(double omega) {
    return 1e-9 * std::max(1.0, omega);
}

/// Closed-form solution of the deterministic problem x'' = -omega^2 x + g(t)
/// for trigonometric-sum forcings (epsilon is ignored). Each term a*cos(nu t)
/// contributes the particular solution a*cos(nu t)/(omega^2 - nu^2), with the
/// homogeneous rotation adjusted to match the initial conditions; sine terms
/// analogously.
inline State exact_deterministic_solution(const OscillatorProblem& p, double t) {
    p.validate();
    if (!p.forcing.is_trig_sum())
        throw std::invalid_argument("exact_deterministic_solution: requires TrigSum forcing");
    const double w = p.omega;
    const double tol = resonance_tolerance(w);

    // particular solution value/derivative at 0 and at t
    double xp0 = 0.0, vp0 = 0.0, xpt = 0.0, vpt = 0.0;
    for (const auto& term : p.forcing.terms()) {
        const double nu = term.frequency;
        if (std::abs(std::abs(nu) - w) < tol)
            throw ResonanceError("exact_deterministic_solution: forcing frequency at resonance");
        const double den = w * w - nu * nu;
        const double a = term.amplitude / den;
        if (term.phase == TrigPhase::Cosine) {
            xp0 += a;
            xpt += a * std::cos(nu * t);
            vpt += -a * nu * std::sin(nu * t);
        } else {
            vp0 += a * nu;
            xpt += a * std::sin(nu * t);
            vpt += a * nu * std::cos(nu * t);
        }
    }

    const double ch = std::cos(w * t), sh = std::sin(w * t);
    const double cx = p.x0 - xp0;
    const double cv = (p.v0 - vp0) / w;
    State s;
    s.x = cx * ch + cv * sh + xpt;
    s.v = -w * cx * sh + w * cv * ch + vpt;
    s.t = t;
    s.check_finite();
    return s;
}

}  // namespace osctrig
