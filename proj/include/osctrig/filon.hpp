#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace osctrig {

struct InvalidGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RegimeViolation : std::domain_error {
    using std::domain_error::domain_error;
};

enum class RuleTag { FilonSine, FilonCosine, Lobatto5, Trapezoid };

struct QuadratureRule {
    RuleTag tag = RuleTag::FilonSine;
    int node_count = 5;  // 2n+1 nodes = 2n panels
};

/// Filon weights for theta = k*h_quad. Below theta_switch the closed forms
/// cancel catastrophically and a Maclaurin series is used instead.
template <class Real>
struct FilonCoefficients {
    Real theta{}, alpha{}, beta{}, gamma{};
};

inline constexpr double filon_theta_switch = 1.0 / 16.0;

namespace detail {

// Closed forms, evaluated in long double: near the series switch the direct
// path loses ~6 digits to cancellation and double precision alone cannot meet
// the continuity tolerance.
template <class Real>
FilonCoefficients<Real> filon_coefficients_direct(Real theta) {
    const long double t = static_cast<long double>(theta);
    const long double s = std::sin(t), c = std::cos(t);
    const long double t2 = t * t, t3 = t2 * t;
    FilonCoefficients<Real> f;
    f.theta = theta;
    f.alpha = static_cast<Real>(1.0L / t + s * c / t2 - 2.0L * s * s / t3);
    f.beta = static_cast<Real>(2.0L * ((1.0L + c * c) / t2 - 2.0L * s * c / t3));
    f.gamma = static_cast<Real>(4.0L * (s / t3 - c / t2));
    return f;
}

template <class Real>
FilonCoefficients<Real> filon_coefficients_series(Real theta) {
    const Real t2 = theta * theta;
    FilonCoefficients<Real> f;
    f.theta = theta;
    f.alpha = theta * t2 *
              (Real(2.0L / 45.0L) +
               t2 * (Real(-2.0L / 315.0L) +
                     t2 * (Real(2.0L / 4725.0L) +
                           t2 * (Real(-8.0L / 467775.0L) + t2 * Real(4.0L / 8513505.0L)))));
    f.beta = Real(2.0L / 3.0L) +
             t2 * (Real(2.0L / 15.0L) +
                   t2 * (Real(-4.0L / 105.0L) +
                         t2 * (Real(2.0L / 567.0L) +
                               t2 * (Real(-4.0L / 22275.0L) + t2 * Real(4.0L / 675675.0L)))));
    f.gamma = Real(4.0L / 3.0L) +
              t2 * (Real(-2.0L / 15.0L) +
                    t2 * (Real(1.0L / 210.0L) +
                          t2 * (Real(-1.0L / 11340.0L) +
                                t2 * (Real(1.0L / 997920.0L) - t2 * Real(1.0L / 129729600.0L)))));
    return f;
}

}  // namespace detail

template <class Real>
FilonCoefficients<Real> filon_coefficients(Real theta) {
    if (!(theta >= Real(0)) || !std::isfinite(static_cast<double>(theta)))
        throw std::invalid_argument("filon_coefficients: theta must be finite and >= 0");
    if (theta < Real(filon_theta_switch)) return detail::filon_coefficients_series(theta);
    return detail::filon_coefficients_direct(theta);
}

namespace detail {

template <class Real>
void check_filon_grid(Real a, Real b, int node_count) {
    if (!(b > a)) throw InvalidGrid("filon: reversed or empty interval");
    if (node_count < 3 || node_count % 2 == 0)
        throw InvalidGrid("filon: node_count must be odd and >= 3");
}

}  // namespace detail

/// Filon's sine rule for integral of psi(x)*sin(k*x) over [a, b] on
/// node_count = 2n+1 equispaced nodes.
template <class F, class Real>
Real filon_sine(F&& psi, Real a, Real b, Real k, int node_count = 5) {
    detail::check_filon_grid(a, b, node_count);
    const int n = (node_count - 1) / 2;
    const Real h = (b - a) / Real(2 * n);
    auto cf = filon_coefficients(std::abs(k) * h);
    if (k < Real(0)) cf.alpha = -cf.alpha;  // alpha is odd in theta, beta/gamma even

    Real even = 0, odd = 0;
    Real pa = 0, pb = 0;
    for (int r = 0; r <= 2 * n; ++r) {
        const Real x = a + h * Real(r);
        const Real px = psi(x);
        if (r == 0) pa = px;
        if (r == 2 * n) pb = px;
        (r % 2 == 0 ? even : odd) += px * std::sin(k * x);
    }
    even -= (pa * std::sin(k * a) + pb * std::sin(k * b)) / Real(2);
    return h * (cf.alpha * (pa * std::cos(k * a) - pb * std::cos(k * b)) + cf.beta * even +
                cf.gamma * odd);
}

/// Filon's cosine rule: the z = pi/2 phase shift of the sine rule.
template <class F, class Real>
Real filon_cosine(F&& psi, Real a, Real b, Real k, int node_count = 5) {
    detail::check_filon_grid(a, b, node_count);
    const int n = (node_count - 1) / 2;
    const Real h = (b - a) / Real(2 * n);
    auto cf = filon_coefficients(std::abs(k) * h);
    if (k < Real(0)) cf.alpha = -cf.alpha;

    Real even = 0, odd = 0;
    Real pa = 0, pb = 0;
    for (int r = 0; r <= 2 * n; ++r) {
        const Real x = a + h * Real(r);
        const Real px = psi(x);
        if (r == 0) pa = px;
        if (r == 2 * n) pb = px;
        (r % 2 == 0 ? even : odd) += px * std::cos(k * x);
    }
    even -= (pa * std::cos(k * a) + pb * std::cos(k * b)) / Real(2);
    return h * (cf.alpha * (pb * std::sin(k * b) - pa * std::sin(k * a)) + cf.beta * even +
                cf.gamma * odd);
}

/// 5-point Gauss-Lobatto rule on [a, b]; exact for polynomials of degree <= 7.
template <class F, class Real>
Real lobatto5(F&& f, Real a, Real b) {
    if (!(b > a)) throw InvalidGrid("lobatto5: reversed or empty interval");
    const Real node = std::sqrt(Real(3) / Real(7));
    const Real mid = (a + b) / Real(2), half = (b - a) / Real(2);
    const Real w_end = Real(1) / Real(10);
    const Real w_int = Real(49) / Real(90);
    const Real w_mid = Real(32) / Real(45);
    return half * (w_end * (f(a) + f(b)) + w_int * (f(mid - half * node) + f(mid + half * node)) +
                   w_mid * f(mid));
}

/// Composite trapezoid on node_count equispaced nodes.
template <class F, class Real>
Real trapezoid(F&& f, Real a, Real b, int node_count = 5) {
    if (!(b > a)) throw InvalidGrid("trapezoid: reversed or empty interval");
    if (node_count < 2) throw InvalidGrid("trapezoid: need at least 2 nodes");
    const Real h = (b - a) / Real(node_count - 1);
    Real sum = (f(a) + f(b)) / Real(2);
    for (int i = 1; i < node_count - 1; ++i) sum += f(a + h * Real(i));
    return h * sum;
}

struct FilonErrorEstimate {
    double h_quad = 0.0;
    double theta = 0.0;
    double H_theta = 0.0;
    double M = 0.0;
    double bound = 0.0;
};

/// Leading-order Filon error factor H(theta). Derived from the quadratic
/// interpolation error integrated against the oscillatory kernel:
///   H(theta) = | sin(theta)/(3 theta^2) + cos(theta)/theta^3 - sin(theta)/theta^4 |,
/// which is finite as theta -> 0 (~ theta/45). The transcription with the
/// theta^3/theta^4 powers transposed diverges and cannot be the bound factor.
template <class Real>
Real filon_H(Real theta) {
    const Real t = std::abs(theta);
    if (t < Real(filon_theta_switch)) {
        const Real t2 = t * t;
        return std::abs(t * (Real(-1.0L / 45.0L) +
                             t2 * (Real(1.0L / 630.0L) +
                                   t2 * (Real(-1.0L / 22680.0L) +
                                         t2 * (Real(1.0L / 1496880.0L) -
                                               t2 * Real(1.0L / 155675520.0L))))));
    }
    const long double td = static_cast<long double>(t);
    const long double s = std::sin(td), c = std::cos(td);
    const long double t2 = td * td;
    return static_cast<Real>(std::abs(s / (3.0L * t2) + c / (t2 * td) - s / (t2 * t2)));
}

/// A-priori bound H(theta)*M*(b-a)*h_quad^3, valid in the theta < 1 regime.
inline FilonErrorEstimate filon_error_bound(double theta, double M, double a, double b,
                                            double h_quad) {
    if (!(theta < 1.0)) throw RegimeViolation("filon_error_bound: requires theta < 1");
    if (!(M >= 0.0)) throw std::invalid_argument("filon_error_bound: M must be nonnegative");
    FilonErrorEstimate e;
    e.h_quad = h_quad;
    e.theta = theta;
    e.H_theta = filon_H(theta);
    e.M = M;
    e.bound = e.H_theta * M * (b - a) * h_quad * h_quad * h_quad;
    return e;
}

}  // namespace osctrig
