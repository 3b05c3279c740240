#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace osctrig {

enum class TrigPhase { Cosine, Sine };

/// One term a*cos(nu*t) or a*sin(nu*t) of a trigonometric forcing sum.
struct TrigTerm {
    double amplitude = 0.0;
    double frequency = 0.0;  // angular frequency nu
    TrigPhase phase = TrigPhase::Cosine;
};

/// Deterministic forcing g(t): either a finite trigonometric sum or an
/// arbitrary callable with an optional bound on |g'''|.
class Forcing {
public:
    Forcing() = default;  // empty TrigSum, g == 0

    explicit Forcing(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {}

    Forcing(std::function<double(double)> fn, std::optional<double> third_derivative_bound = {})
        : callable_(std::move(fn)), m3_hint_(third_derivative_bound) {
        if (!callable_) throw std::invalid_argument("Forcing: null callable");
    }

    bool is_trig_sum() const { return !callable_; }
    const std::vector<TrigTerm>& terms() const {
        if (callable_) throw std::logic_error("Forcing: callable has no term list");
        return terms_;
    }
    std::optional<double> third_derivative_hint() const { return m3_hint_; }

    double operator()(double t) const {
        if (!std::isfinite(t)) throw std::invalid_argument("Forcing: non-finite t");
        if (callable_) return callable_(t);
        double g = 0.0;
        for (const auto& term : terms_)
            g += term.amplitude * (term.phase == TrigPhase::Cosine
                                       ? std::cos(term.frequency * t)
                                       : std::sin(term.frequency * t));
        return g;
    }

private:
    std::vector<TrigTerm> terms_;
    std::function<double(double)> callable_;
    std::optional<double> m3_hint_;
};

inline double evaluate_forcing(const Forcing& f, double t) { return f(t); }

/// Bound on |g'''| over [a, b], used by the Filon error estimate.
/// Exact for trig sums; for callables, uses the declared hint or a
/// finite-difference probe (an estimate, not a guarantee).
inline double third_derivative_bound(const Forcing& f, double a, double b) {
    if (f.is_trig_sum()) {
        double m = 0.0;
        for (const auto& term : f.terms())
            m += std::abs(term.amplitude) * std::abs(term.frequency) * term.frequency * term.frequency;
        return m;
    }
    if (f.third_derivative_hint()) return *f.third_derivative_hint();
    // central 4-point third difference on a probe grid
    const int probes = 64;
    const double d = (b - a) / 256.0;
    double m = 0.0;
    for (int i = 0; i <= probes; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / probes;
        const double g3 = (f(t + 2 * d) - 2 * f(t + d) + 2 * f(t - d) - f(t - 2 * d)) / (2 * d * d * d);
        m = std::max(m, std::abs(g3));
    }
    return m;
}

}  // namespace osctrig
