#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "avf/analysis.hpp"
#include "avf/integrate.hpp"
#include "oracles.hpp"

using avf::DiscreteGradientSpec;
using avf::HamiltonianSystem;
using avf::PhaseState;
using avf::PotentialModel;
using avf::Scheme;
using avf::SchemeConfig;
using avf::SchemeForm;
using avf::SolverOptions;
using avf::StepCounters;
using avf::Vector;

namespace {

constexpr double kPi = 3.14159265358979323846;

HamiltonianSystem harmonic1d() { return {PotentialModel::radial_power(0.5, 2.0, 1)}; }

HamiltonianSystem kepler3d() { return {PotentialModel::kepler(1.0, 3)}; }

HamiltonianSystem anharmonic3d() { return {PotentialModel::anharmonic(0.5, 0.01, 3)}; }

SchemeConfig config_for(Scheme scheme, const HamiltonianSystem& sys, double h,
                        double tol = 1e-14) {
    return SchemeConfig{scheme, SchemeForm::Separable, h, tol, 200,
                        DiscreteGradientSpec::preferred(sys.potential), {}};
}

PhaseState kepler_circular_state() {
    const double v = std::sqrt(1.0 / 3.5);
    return PhaseState({3.5, 0.0, 0.0}, {0.0, v, 0.0});
}

PhaseState anharmonic_circular_state() {
    const double v = std::sqrt(3.5 * 1.785);
    return PhaseState({3.5, 0.0, 0.0}, {0.0, v, 0.0});
}

}  // namespace

TEST_CASE("solve_fixed_point on a constant map") {
    const PhaseState c({2.0}, {-1.0});
    const auto res = avf::solve_fixed_point([&](const PhaseState&) { return c; },
                                            PhaseState({0.0}, {0.0}), 1e-14, 50);
    CHECK(res.y.x[0] == 2.0);
    CHECK(res.y.p[0] == -1.0);
    CHECK(res.iterations <= 2);
}

TEST_CASE("solve_fixed_point on a linear contraction") {
    // y -> 0.5 y + 1 has fixed point 2.
    const auto res = avf::solve_fixed_point(
        [](const PhaseState& y) {
            return PhaseState({0.5 * y.x[0] + 1.0}, {0.5 * y.p[0] + 1.0});
        },
        PhaseState({0.0}, {0.0}), 1e-14, 100);
    CHECK(res.y.x[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(res.y.p[0] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("solve_fixed_point post-condition holds for the returned state") {
    const auto map = [](const PhaseState& y) {
        return PhaseState({0.9 * y.x[0] + 0.3}, {0.9 * y.p[0] - 0.1});
    };
    const auto res = avf::solve_fixed_point(map, PhaseState({5.0}, {5.0}), 1e-12, 300);
    const PhaseState gy = map(res.y);
    const double resid = std::max(std::abs(gy.x[0] - res.y.x[0]), std::abs(gy.p[0] - res.y.p[0]));
    CHECK(resid <= 1e-12 * (1.0 + std::max(std::abs(res.y.x[0]), std::abs(res.y.p[0]))));
}

TEST_CASE("solve_fixed_point rescues a non-contractive linear map via Newton") {
    // y -> 2y + 1 diverges under plain iteration; its residual is affine, so
    // the Newton fallback lands on the fixed point -1 exactly.
    const auto res = avf::solve_fixed_point(
        [](const PhaseState& y) {
            return PhaseState({2.0 * y.x[0] + 1.0}, {2.0 * y.p[0] + 1.0});
        },
        PhaseState({0.3}, {0.1}), 1e-13, 100);
    CHECK(res.y.x[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(res.y.p[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("solve_fixed_point reports NoConvergence when no fixed point exists") {
    // y -> y^2 + 0.26 has no real fixed point.
    try {
        (void)avf::solve_fixed_point(
            [](const PhaseState& y) {
                return PhaseState({y.x[0] * y.x[0] + 0.26}, {y.p[0]});
            },
            PhaseState({0.5}, {0.0}), 1e-14, 40);
        FAIL("expected NoConvergence");
    } catch (const avf::NoConvergence& e) {
        CHECK(e.iterations >= 1);
        CHECK(e.iterations <= 40);
        CHECK(!(e.last_residual <= 0.0));  // positive or non-finite
    }
}

TEST_CASE("avf_step on the harmonic oscillator matches the midpoint closed form") {
    // AVF on a quadratic potential is the implicit midpoint rule; the 2x2
    // solve gives x1 = ((1 - h^2/4) x0 + h p0) / (1 + h^2/4).
    const auto sys = harmonic1d();
    const auto dgrad = DiscreteGradientSpec::gauss_legendre(sys.potential, 2);
    const double h = 0.1;
    StepCounters counters;
    const PhaseState y1 =
        avf::avf_step(sys, dgrad, PhaseState({1.0}, {0.0}), h, SolverOptions{1e-15, 200, 1.0},
                      counters);
    const double denom = 1.0 + h * h / 4.0;
    const double x1 = (1.0 - h * h / 4.0) / denom;
    const double p1 = -h * (1.0 + x1) / 2.0;
    CHECK(y1.x[0] == doctest::Approx(x1).epsilon(1e-13));
    CHECK(y1.p[0] == doctest::Approx(p1).epsilon(1e-13));
}

TEST_CASE("avf_step with h = 0 returns the state unchanged") {
    const auto sys = kepler3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    StepCounters counters;
    const PhaseState y0 = kepler_circular_state();
    const PhaseState y1 = avf::avf_step(sys, dgrad, y0, 0.0, SolverOptions{}, counters);
    CHECK(oracles::phase_dist(y0, y1) == 0.0);
}

TEST_CASE("avf_step conserves energy over one Kepler step") {
    const auto sys = kepler3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    StepCounters counters;
    const PhaseState y0 = kepler_circular_state();
    const PhaseState y1 = avf::avf_step(sys, dgrad, y0, 0.2, SolverOptions{1e-14, 200, 1.0}, counters);
    CHECK(std::abs(avf::energy(sys, y1) - avf::energy(sys, y0)) <= 1e-13);
}

TEST_CASE("lex_step reproduces the exact harmonic rotation") {
    const auto sys = harmonic1d();
    const auto dgrad = DiscreteGradientSpec::gauss_legendre(sys.potential, 2);
    const double h = 0.1;
    StepCounters counters;
    const PhaseState y1 = avf::lex_step(sys, dgrad, PhaseState({1.0}, {0.0}), h,
                                        SolverOptions{1e-15, 200, 1.0}, counters);
    CHECK(y1.x[0] == doctest::Approx(std::cos(h)).epsilon(1e-12));
    CHECK(y1.p[0] == doctest::Approx(-std::sin(h)).epsilon(1e-12));
}

TEST_CASE("lex_step on a zero Hessian reduces to avf_step") {
    // Free particle: RadialPower with zero coefficient.
    const HamiltonianSystem sys{PotentialModel::radial_power(0.0, 2.0, 2)};
    const auto dgrad = DiscreteGradientSpec::gauss_legendre(sys.potential, 2);
    const PhaseState y0({0.4, -0.2}, {1.0, 0.5});
    StepCounters ca, cl;
    const PhaseState ya = avf::avf_step(sys, dgrad, y0, 0.3, SolverOptions{}, ca);
    const PhaseState yl = avf::lex_step(sys, dgrad, y0, 0.3, SolverOptions{}, cl);
    CHECK(oracles::phase_dist(ya, yl) <= 1e-15);
}

TEST_CASE("slex equals lex on constant Hessians") {
    const auto sys = harmonic1d();
    const auto dgrad = DiscreteGradientSpec::gauss_legendre(sys.potential, 2);
    const PhaseState y0({0.7}, {0.4});
    StepCounters cl, cs;
    const PhaseState yl = avf::lex_step(sys, dgrad, y0, 0.25, SolverOptions{}, cl);
    const PhaseState ys = avf::slex_step(sys, dgrad, y0, 0.25, SolverOptions{}, cs);
    CHECK(oracles::phase_dist(yl, ys) <= 1e-13);
}

TEST_CASE("slex_step is time reversible") {
    const auto sys = anharmonic3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    const SolverOptions solver{1e-14, 200, 1.0};
    const PhaseState y0 = anharmonic_circular_state();
    StepCounters c;
    const PhaseState y1 = avf::slex_step(sys, dgrad, y0, 0.2, solver, c);
    const PhaseState back = avf::slex_step(sys, dgrad, y1, -0.2, solver, c);
    CHECK(oracles::phase_dist(back, y0) <= 10.0 * 1e-14);
}

TEST_CASE("avf_step is self-adjoint (time symmetric)") {
    const auto sys = anharmonic3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    const SolverOptions solver{1e-14, 200, 1.0};
    const PhaseState y0 = anharmonic_circular_state();
    StepCounters c;
    const PhaseState y1 = avf::avf_step(sys, dgrad, y0, 0.2, solver, c);
    const PhaseState back = avf::avf_step(sys, dgrad, y1, -0.2, solver, c);
    CHECK(oracles::phase_dist(back, y0) <= 10.0 * 1e-14);
}

TEST_CASE("local error ladder: one-step orders 3 (AVF), 4 (LEX), 5 (SLEX)") {
    const auto sys = anharmonic3d();
    const PhaseState y0 = anharmonic_circular_state();
    const std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};

    const auto one_step = [&](Scheme scheme, double h) {
        const SchemeConfig cfg = config_for(scheme, sys, h, 1e-15);
        StepCounters c;
        return avf::scheme_step(sys, cfg, y0, h, c);
    };

    const auto slope_for = [&](Scheme scheme) {
        std::vector<std::pair<double, double>> points;
        for (double h : ladder) {
            const PhaseState ref = avf::reference_flow_rk4(sys, y0, h, 512);
            points.emplace_back(h, oracles::phase_dist(one_step(scheme, h), ref));
        }
        return avf::fit_order(points).slope;
    };

    CHECK(slope_for(Scheme::AVF) == doctest::Approx(3.0).epsilon(0.05));
    CHECK(slope_for(Scheme::LEX) == doctest::Approx(4.0).epsilon(0.0375));
    CHECK(slope_for(Scheme::SLEX) == doctest::Approx(5.0).epsilon(0.04));
}

TEST_CASE("counters: exactly one gradient expression per solver iteration") {
    const auto sys = kepler3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    StepCounters c;
    (void)avf::avf_step(sys, dgrad, kepler_circular_state(), 0.2, SolverOptions{1e-14, 200, 1.0}, c);
    CHECK(c.gradient_evals == c.solver_iterations);
    CHECK(c.hessian_evals == 0);
    CHECK(c.matrix_function_builds == 0);

    StepCounters cl;
    (void)avf::lex_step(sys, dgrad, kepler_circular_state(), 0.2, SolverOptions{1e-14, 200, 1.0}, cl);
    CHECK(cl.gradient_evals == cl.solver_iterations);
    CHECK(cl.hessian_evals == 1);
    CHECK(cl.matrix_function_builds == 1);
    CHECK(cl.modifier_applications == 2 * cl.solver_iterations);

    StepCounters cs;
    (void)avf::slex_step(sys, dgrad, kepler_circular_state(), 0.2, SolverOptions{1e-14, 200, 1.0}, cs);
    CHECK(cs.hessian_evals == cs.solver_iterations);
    CHECK(cs.matrix_function_builds == cs.solver_iterations);
}

TEST_CASE("general form agrees with the separable form") {
    const auto sys = anharmonic3d();
    const PhaseState y0 = anharmonic_circular_state();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    const SolverOptions solver{1e-14, 200, 1.0};
    StepCounters c;
    for (bool midpoint : {false, true}) {
        const auto stepper = midpoint ? avf::slex_step : avf::lex_step;
        const PhaseState sep = stepper(sys, dgrad, y0, 0.15, solver, c, SchemeForm::Separable, {});
        const PhaseState gen = stepper(sys, dgrad, y0, 0.15, solver, c, SchemeForm::General, {});
        CHECK(oracles::phase_dist(sep, gen) <= 1e-12);
    }
}

TEST_CASE("general form conserves energy (skew Lambda)") {
    const auto sys = kepler3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    const SolverOptions solver{1e-14, 200, 1.0};
    StepCounters c;
    PhaseState y = kepler_circular_state();
    const double h0 = avf::energy(sys, y);
    for (int i = 0; i < 50; ++i)
        y = avf::lex_step(sys, dgrad, y, 0.2, solver, c, SchemeForm::General, {});
    CHECK(std::abs(avf::energy(sys, y) - h0) <= 1e-12);
}

TEST_CASE("locally exact schemes are exact on quadratic Hamiltonians") {
    // V = x^T K x / 2 with K = Q diag(d) Q^T; the exact flow rotates each
    // eigenmode at rate sqrt(d_i).  Steps up to 0.9 pi / ||Omega||.
    auto g = oracles::rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + static_cast<int>(oracles::uniform(g, 0.0, 3.999));
        const avf::SquareMatrix q = oracles::random_orthogonal(g, m);
        Vector d(static_cast<std::size_t>(m));
        for (double& e : d) e = oracles::uniform(g, 0.1, 4.0);
        avf::SquareMatrix k(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int l = 0; l < m; ++l)
                    s += q(i, l) * d[static_cast<std::size_t>(l)] * q(j, l);
                k(i, j) = s;
            }
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) k(i, j) = k(j, i) = 0.5 * (k(i, j) + k(j, i));
        k.assert_symmetric();

        const PotentialModel pot = PotentialModel::general(
            [k](std::span<const double> x) { return 0.5 * k.bilinear(x, x); }, m,
            [k](std::span<const double> x) { return k * x; },
            [k](std::span<const double>) { return k; });
        const HamiltonianSystem sys{pot};
        const auto dgrad = DiscreteGradientSpec::gauss_legendre(pot, 2);

        double dmax = 0.0;
        for (double e : d) dmax = std::max(dmax, e);
        const double h = 0.9 * kPi / std::sqrt(dmax);

        const PhaseState y0(oracles::random_vector(g, static_cast<std::size_t>(m)),
                            oracles::random_vector(g, static_cast<std::size_t>(m)));

        // Exact flow through the eigenbasis.
        const auto exact_flow = [&](const PhaseState& y, double t) {
            Vector zx(static_cast<std::size_t>(m)), zp(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                double sx = 0.0, sp = 0.0;
                for (int l = 0; l < m; ++l) {
                    sx += q(l, i) * y.x[static_cast<std::size_t>(l)];
                    sp += q(l, i) * y.p[static_cast<std::size_t>(l)];
                }
                zx[static_cast<std::size_t>(i)] = sx;
                zp[static_cast<std::size_t>(i)] = sp;
            }
            Vector ox(static_cast<std::size_t>(m)), op(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                const double w = std::sqrt(d[static_cast<std::size_t>(i)]);
                const double c = std::cos(w * t), s = std::sin(w * t);
                ox[static_cast<std::size_t>(i)] =
                    c * zx[static_cast<std::size_t>(i)] + s / w * zp[static_cast<std::size_t>(i)];
                op[static_cast<std::size_t>(i)] =
                    -w * s * zx[static_cast<std::size_t>(i)] + c * zp[static_cast<std::size_t>(i)];
            }
            Vector rx(static_cast<std::size_t>(m)), rp(static_cast<std::size_t>(m));
            for (int l = 0; l < m; ++l) {
                double sx = 0.0, sp = 0.0;
                for (int i = 0; i < m; ++i) {
                    sx += q(l, i) * ox[static_cast<std::size_t>(i)];
                    sp += q(l, i) * op[static_cast<std::size_t>(i)];
                }
                rx[static_cast<std::size_t>(l)] = sx;
                rp[static_cast<std::size_t>(l)] = sp;
            }
            return PhaseState(std::move(rx), std::move(rp));
        };

        const PhaseState exact = exact_flow(y0, h);
        const SolverOptions solver{1e-14, 400, 1.0};
        StepCounters c;
        const PhaseState lex = avf::lex_step(sys, dgrad, y0, h, solver, c);
        const PhaseState slex = avf::slex_step(sys, dgrad, y0, h, solver, c);
        CHECK(oracles::phase_dist(lex, exact) <= 100.0 * 1e-14);
        CHECK(oracles::phase_dist(slex, exact) <= 100.0 * 1e-14);
    }
}

TEST_CASE("integrate_trajectory basics") {
    const auto sys = kepler3d();
    SchemeConfig cfg = config_for(Scheme::AVF, sys, 0.05);

    const PhaseState y0 = kepler_circular_state();
    const avf::Trajectory none = avf::integrate_trajectory(sys, cfg, y0, 0.0);
    CHECK(none.states.size() == 1);
    CHECK(none.times.front() == 0.0);

    CHECK_THROWS_AS((void)avf::integrate_trajectory(sys, cfg, y0, 0.0751), std::invalid_argument);

    const avf::Trajectory traj = avf::integrate_trajectory(sys, cfg, y0, 10.0);
    CHECK(traj.states.size() == 201);
    CHECK(traj.final_time() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(traj.energies.size() == traj.states.size());
    CHECK(traj.counters.solver_iterations > 0);
}

TEST_CASE("trajectory energy drift stays at the solver floor") {
    const auto sys = kepler3d();
    const SchemeConfig cfg = config_for(Scheme::AVF, sys, 0.05);
    const avf::Trajectory traj =
        avf::integrate_trajectory(sys, cfg, kepler_circular_state(), 100.0);
    const double h0 = traj.energies.front();
    double drift = 0.0;
    for (double e : traj.energies) drift = std::max(drift, std::abs(e - h0));
    CHECK(drift <= 1e-10);
}

TEST_CASE("energy preservation over 1e4 steps for all schemes with closed gradients") {
    const auto sys = kepler3d();
    const PhaseState y0 = kepler_circular_state();
    const double tol = 1e-14;
    const double h = 0.2;
    for (Scheme scheme : {Scheme::AVF, Scheme::LEX, Scheme::SLEX}) {
        const SchemeConfig cfg = config_for(scheme, sys, h, tol);
        const avf::Trajectory traj = avf::integrate_trajectory(sys, cfg, y0, 1e4 * h);
        const double h0 = traj.energies.front();
        double drift = 0.0;
        for (double e : traj.energies) drift = std::max(drift, std::abs(e - h0));
        CHECK(drift <= 50.0 * tol * std::max(1.0, std::abs(h0)));
    }
}

TEST_CASE("lex_step is not time symmetric (negative control)") {
    // The delta anchor at x_n breaks the h -> -h symmetry; the round trip
    // carries an O(h^4) defect well above solver noise.
    const auto sys = anharmonic3d();
    const auto dgrad = DiscreteGradientSpec::preferred(sys.potential);
    const SolverOptions solver{1e-14, 200, 1.0};
    const PhaseState y0 = anharmonic_circular_state();
    StepCounters c;
    const PhaseState y1 = avf::lex_step(sys, dgrad, y0, 0.2, solver, c);
    const PhaseState back = avf::lex_step(sys, dgrad, y1, -0.2, solver, c);
    CHECK(oracles::phase_dist(back, y0) > 1e-8);
}

TEST_CASE("step failures carry the failing index") {
    // LEX on the harmonic oscillator with h > pi sits past the tanc pole.
    const auto sys = harmonic1d();
    SchemeConfig cfg = config_for(Scheme::LEX, sys, 4.0);
    cfg.dgrad = DiscreteGradientSpec::gauss_legendre(sys.potential, 2);
    try {
        (void)avf::integrate_trajectory(sys, cfg, PhaseState({1.0}, {0.0}), 8.0);
        FAIL("expected StepFailure");
    } catch (const avf::StepFailure& e) {
        CHECK(e.step_index == 0);
    }
}

TEST_CASE("scheme config validation") {
    const auto sys = kepler3d();
    SchemeConfig cfg = config_for(Scheme::AVF, sys, 0.1);
    CHECK_NOTHROW(cfg.validate());
    cfg.h = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.h = 0.1;
    cfg.solver_tol = 1e-5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.solver_tol = 1e-14;
    cfg.solver_max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
