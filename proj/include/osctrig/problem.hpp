#pragma once

#include <cmath>
#include <stdexcept>

#include "osctrig/forcing.hpp"

namespace osctrig {

/// Position/velocity pair at a time point.
struct State {
    double x = 0.0;
    double v = 0.0;
    double t = 0.0;

    void check_finite() const {
        if (!std::isfinite(x) || !std::isfinite(v) || !std::isfinite(t))
            throw std::domain_error("State: non-finite value");
    }
};

/// Problem data of the forced stochastic oscillator
///   x'' = -omega^2 x + g(t) + epsilon * xi(t).
struct OscillatorProblem {
    double omega = 1.0;    // > 0
    Forcing forcing;
    double epsilon = 0.0;  // >= 0; 0 gives the deterministic forced oscillator
    double x0 = 0.0;
    double v0 = 0.0;
    double t_end = 1.0;    // > 0

    void validate() const {
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw std::invalid_argument("OscillatorProblem: omega must be positive");
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
            throw std::invalid_argument("OscillatorProblem: epsilon must be nonnegative");
        if (!(t_end > 0.0) || !std::isfinite(t_end))
            throw std::invalid_argument("OscillatorProblem: t_end must be positive");
        if (!std::isfinite(x0) || !std::isfinite(v0))
            throw std::invalid_argument("OscillatorProblem: non-finite initial state");
    }
};

}  // namespace osctrig
