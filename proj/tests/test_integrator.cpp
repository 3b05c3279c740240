#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "osctrig/integrator.hpp"
#include "osctrig/wiener.hpp"

using namespace osctrig;

namespace {
OscillatorProblem make_problem(double omega, std::vector<TrigTerm> terms, double eps, double x0,
                               double v0, double t_end = 1.0) {
    OscillatorProblem p;
    p.omega = omega;
    p.forcing = Forcing(std::move(terms));
    p.epsilon = eps;
    p.x0 = x0;
    p.v0 = v0;
    p.t_end = t_end;
    return p;
}
}  // namespace

TEST_CASE("rotation matrix") {
    SUBCASE("t = 0 is the identity") {
        const auto r = rotation(3.0, 0.0);
        CHECK(r.matrix().isApprox(Eigen::Matrix2d::Identity(), 1e-15));
    }
    SUBCASE("half period flips the state") {
        const auto r = rotation(10.0, std::numbers::pi / 10.0);
        CHECK(r.c == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(std::abs(r.s) < 1e-14);
    }
    SUBCASE("determinant is 1 for random (omega, t)") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> om(0.1, 500.0), time(-10.0, 10.0);
        for (int i = 0; i < 10000; ++i) {
            const auto r = rotation(om(rng), time(rng));
            CHECK(std::abs(r.c * r.c + r.s * r.s - 1.0) < 1e-14);
        }
    }
    SUBCASE("omega must be positive") {
        CHECK_THROWS_AS(rotation(0.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("deterministic step integrals") {
    SUBCASE("zero forcing gives (0, 0)") {
        const StepScheme s(make_problem(10.0, {}, 0.0, 0, 0), 0.25, {RuleTag::FilonSine, 5});
        const auto [is, ic] = deterministic_step_integrals(s, 0.0);
        CHECK(is == 0.0);
        CHECK(ic == 0.0);
    }
    SUBCASE("constant forcing: closed form (1 - cos(hw))/w, sin(hw)/w") {
        // g == 1 as a cosine term with zero frequency
        const double w = 3.0, h = 0.125;
        const auto p = make_problem(w, {{1.0, 0.0, TrigPhase::Cosine}}, 0.0, 0, 0);
        for (auto mode : {KernelMode::ExactTrigKernel, KernelMode::QuadratureKernel}) {
            const StepScheme s(p, h, {RuleTag::FilonSine, 5}, mode);
            const auto [is, ic] = deterministic_step_integrals(s, 0.0);
            CHECK(is == doctest::Approx((1 - std::cos(h * w)) / w).epsilon(1e-9));
            CHECK(ic == doctest::Approx(std::sin(h * w) / w).epsilon(1e-9));
        }
    }
    SUBCASE("experiment forcing: exact kernel vs adaptive quadrature to 1e-12") {
        const double w = 10.0, h = 0.1;
        const auto p = make_problem(w, {{-5.0, 20.0, TrigPhase::Cosine}}, 0.0, 0, 0, 0.1);
        const StepScheme exact(p, h, {RuleTag::FilonSine, 5}, KernelMode::ExactTrigKernel);
        const auto [is, ic] = deterministic_step_integrals(exact, 0.0);
        const double ref_s = static_cast<double>(oracles::adaptive_simpson(
            [&](long double s) {
                return std::sin((0.1L - s) * 10.0L) * (-5.0L * std::cos(20.0L * s));
            },
            0.0L, 0.1L, 1e-16L));
        const double ref_c = static_cast<double>(oracles::adaptive_simpson(
            [&](long double s) {
                return std::cos((0.1L - s) * 10.0L) * (-5.0L * std::cos(20.0L * s));
            },
            0.0L, 0.1L, 1e-16L));
        CHECK(is == doctest::Approx(ref_s).epsilon(1e-12));
        CHECK(ic == doctest::Approx(ref_c).epsilon(1e-12));

        // Filon agrees to the per-integral bound (two inner integrals recombined)
        const StepScheme filon(p, h, {RuleTag::FilonSine, 5});
        const auto [fs, fc] = deterministic_step_integrals(filon, 0.0);
        const double h_quad = h / 4;
        const auto est = filon_error_bound(w * h_quad, 5.0 * 20 * 20 * 20, 0.0, h, h_quad);
        CHECK(std::abs(fs - ref_s) <= 2 * 1.5 * est.bound);
        CHECK(std::abs(fc - ref_c) <= 2 * 1.5 * est.bound);
    }
    SUBCASE("off-mesh time rejected") {
        const StepScheme s(make_problem(10.0, {}, 0.0, 0, 0), 0.25, {RuleTag::FilonSine, 5});
        CHECK_THROWS_AS(deterministic_step_integrals(s, 0.3), std::invalid_argument);
    }
    SUBCASE("exact kernel with callable forcing rejected") {
        OscillatorProblem p;
        p.omega = 2.0;
        p.forcing = Forcing([](double) { return 1.0; });
        CHECK_THROWS_AS(StepScheme(p, 0.25, {RuleTag::FilonSine, 5}, KernelMode::ExactTrigKernel),
                        std::invalid_argument);
    }
}

TEST_CASE("single steps") {
    SUBCASE("g == 0, eps = 0: energy conserved over 10^4 steps") {
        const double w = 5.0;
        const auto p = make_problem(w, {}, 0.0, 0.3, -0.7, 100.0);
        const StepScheme s(p, 0.01, {RuleTag::FilonSine, 5});
        State st{p.x0, p.v0, 0.0};
        const double e0 = w * w * st.x * st.x + st.v * st.v;
        for (int n = 0; n < 10000; ++n) st = step(s, st, 0.0);
        CHECK(w * w * st.x * st.x + st.v * st.v == doctest::Approx(e0).epsilon(1e-12));
    }
    SUBCASE("constant forcing, omega = 1, one step from rest") {
        const double h = 0.25;
        const auto p = make_problem(1.0, {{1.0, 0.0, TrigPhase::Cosine}}, 0.0, 0.0, 0.0, h);
        const StepScheme s(p, h, {RuleTag::FilonSine, 5}, KernelMode::ExactTrigKernel);
        const State st = step(s, {0.0, 0.0, 0.0}, 0.0);
        CHECK(st.x == doctest::Approx(1 - std::cos(h)).epsilon(1e-13));
        CHECK(st.v == doctest::Approx(std::sin(h)).epsilon(1e-13));
    }
    SUBCASE("noise-only step reads off the Wiener weights") {
        const double w = 4.0, h = 0.5, dW = 0.37;
        const auto p = make_problem(w, {}, 1.0, 0.0, 0.0, h);
        const StepScheme s(p, h, {RuleTag::FilonSine, 5});
        const State st = step(s, {0.0, 0.0, 0.0}, dW);
        CHECK(st.x == doctest::Approx(std::sin(h * w) / w * dW).epsilon(1e-15));
        CHECK(st.v == doctest::Approx(std::cos(h * w) * dW).epsilon(1e-15));
    }
    SUBCASE("off-mesh state rejected") {
        const auto p = make_problem(2.0, {}, 0.0, 0, 0);
        const StepScheme s(p, 0.25, {RuleTag::FilonSine, 5});
        CHECK_THROWS_AS(step(s, {0.0, 0.0, 0.1}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("integrate") {
    const auto p10 = make_problem(10.0, {{-5.0, 20.0, TrigPhase::Cosine}}, 0.3, 0.8, 1.0);

    SUBCASE("zero increments reproduce the eps = 0 trajectory") {
        const StepScheme noisy(p10, 0.0625, {RuleTag::FilonSine, 5});
        auto quiet_problem = p10;
        quiet_problem.epsilon = 0.0;
        const StepScheme quiet(quiet_problem, 0.0625, {RuleTag::FilonSine, 5});
        const std::vector<double> zeros(16, 0.0);
        const auto ta = integrate(noisy, zeros);
        const auto tb = integrate(quiet, zeros);
        REQUIRE(ta.size() == tb.size());
        for (std::size_t i = 0; i < ta.size(); ++i) {
            CHECK(ta[i].x == tb[i].x);
            CHECK(ta[i].v == tb[i].v);
        }
    }
    SUBCASE("N = 1 equals a single step") {
        auto p = p10;
        p.t_end = 0.25;
        const StepScheme s(p, 0.25, {RuleTag::FilonSine, 5});
        const auto traj = integrate(s, {0.11});
        REQUIRE(traj.size() == 2);
        const State manual = step(s, {p.x0, p.v0, 0.0}, 0.11);
        CHECK(traj[1].x == manual.x);
        CHECK(traj[1].v == manual.v);
    }
    SUBCASE("length mismatch rejected") {
        const StepScheme s(p10, 0.25, {RuleTag::FilonSine, 5});
        CHECK_THROWS_AS(integrate(s, std::vector<double>(5, 0.0)), std::invalid_argument);
    }
    SUBCASE("Filon vs exact kernel on one path within the accumulated bound") {
        const double h = 0.0625;
        const StepScheme filon(p10, h, {RuleTag::FilonSine, 5});
        const StepScheme exact(p10, h, {RuleTag::FilonSine, 5}, KernelMode::ExactTrigKernel);
        const auto path = generate_path(99, 0, 1024, 1.0);
        const auto dW = coarsen(path, 1024 / filon.n_steps());
        const auto ta = integrate(filon, dW);
        const auto tb = integrate(exact, dW);
        // per-step bound on each inner integral, both channels, summed over steps
        const double h_quad = h / 4;
        const auto est = filon_error_bound(10.0 * h_quad, 5.0 * 8000, 0.0, h, h_quad);
        const double budget = 1.5 * 2 * est.bound * static_cast<double>(filon.n_steps());
        CHECK(std::abs(ta.back().x - tb.back().x) <= budget);
    }
}

TEST_CASE("g == 0 trajectory is bit-identical to the linear-scheme recursion") {
    // independent implementation of the linear stochastic trigonometric scheme
    const double w = 100.0, h = 0.03125, eps = 0.3;
    const auto p = make_problem(w, {}, eps, 0.8, 1.0);
    const StepScheme s(p, h, {RuleTag::Trapezoid, 5});
    const auto path = generate_path(4, 2, 128, 1.0);
    const auto dW = coarsen(path, 128 / s.n_steps());
    const auto traj = integrate(s, dW);

    double x = p.x0, v = p.v0;
    const double c = std::cos(h * w), si = std::sin(h * w);
    for (std::size_t n = 0; n < dW.size(); ++n) {
        const double xn = c * x + si / w * v + eps * si / w * dW[n];
        const double vn = -w * si * x + c * v + eps * c * dW[n];
        x = xn;
        v = vn;
        CHECK(traj[n + 1].x == x);
        CHECK(traj[n + 1].v == v);
    }
}

TEST_CASE("noise channel is linear in epsilon") {
    auto base = make_problem(10.0, {{-5.0, 20.0, TrigPhase::Cosine}}, 0.0, 0.8, 1.0);
    const auto path = generate_path(21, 3, 256, 1.0);
    auto run = [&](double eps) {
        auto p = base;
        p.epsilon = eps;
        const StepScheme s(p, 0.0625, {RuleTag::FilonSine, 5});
        return integrate(s, coarsen(path, 256 / s.n_steps()));
    };
    const auto t0 = run(0.0), t1 = run(0.2), t2 = run(0.4);
    for (std::size_t i = 1; i < t0.size(); ++i) {
        const double d1 = t1[i].x - t0[i].x, d2 = t2[i].x - t0[i].x;
        if (std::abs(d1) > 1e-12) CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("all quadrature modes converge to each other as h shrinks") {
    const auto p = make_problem(10.0, {{-5.0, 20.0, TrigPhase::Cosine}}, 0.3, 0.8, 1.0);
    const std::size_t n_fine = 512;
    const auto path = generate_path(17, 0, n_fine, 1.0);

    auto final_x = [&](double h, RuleTag tag, KernelMode mode) {
        const StepScheme s(p, h, {tag, 5}, mode);
        return integrate(s, coarsen(path, n_fine / s.n_steps())).back().x;
    };
    double prev_spread = 0.0;
    for (int lg = 4; lg <= 9; ++lg) {
        const double h = std::pow(2.0, -lg);
        const double xf = final_x(h, RuleTag::FilonSine, KernelMode::QuadratureKernel);
        const double xl = final_x(h, RuleTag::Lobatto5, KernelMode::QuadratureKernel);
        const double xt = final_x(h, RuleTag::Trapezoid, KernelMode::QuadratureKernel);
        const double xe = final_x(h, RuleTag::FilonSine, KernelMode::ExactTrigKernel);
        const double spread = std::max({std::abs(xf - xe), std::abs(xl - xe), std::abs(xt - xe)});
        if (lg == 4) prev_spread = spread;
        if (lg == 9) {
            CHECK(spread < 1e-5);
            CHECK(spread < prev_spread);
        }
    }
}

TEST_CASE("scheme construction validates the mesh") {
    const auto p = make_problem(2.0, {}, 0.0, 0, 0);
    CHECK_THROWS_AS(StepScheme(p, 0.3, {RuleTag::FilonSine, 5}), std::invalid_argument);
    CHECK_THROWS_AS(StepScheme(p, -0.25, {RuleTag::FilonSine, 5}), std::invalid_argument);
    CHECK_NOTHROW(StepScheme(p, 0.25, {RuleTag::FilonSine, 5}));
}
