#include "avf/integrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace avf {

namespace {

// Gaussian elimination with partial pivoting; a is n x n row-major, b length n.
Vector solve_linear(std::vector<double> a, Vector b) {
    const int n = static_cast<int>(b.size());
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (at(pivot, col) == 0.0)
            throw NoConvergence("solve_linear: singular Newton system", 0, 0.0);
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(col, j));
            std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = at(r, col) / at(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) at(r, j) -= f * at(col, j);
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    Vector x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    return x;
}

double residual_norm(const PhaseState& y, const PhaseState& gy) {
    double m = 0.0;
    for (std::size_t i = 0; i < y.x.size(); ++i) {
        m = std::max(m, std::abs(gy.x[i] - y.x[i]));
        m = std::max(m, std::abs(gy.p[i] - y.p[i]));
    }
    return m;
}

double state_norm_inf(const PhaseState& y) {
    return std::max(norm_inf(y.x), norm_inf(y.p));
}

// Euler predictor y + h F(y).  Its force evaluation is not a discrete
// gradient expression, so it stays outside the gradient_evals counter.
PhaseState euler_predictor(const HamiltonianSystem& sys, const PhaseState& y, double h) {
    const PhaseState f = vector_field(sys, y);
    PhaseState out = y;
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        out.x[i] += h * f.x[i];
        out.p[i] += h * f.p[i];
    }
    return out;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::AVF: return "avf";
        case Scheme::LEX: return "lex";
        case Scheme::SLEX: return "slex";
    }
    return "?";
}

StepCounters& StepCounters::operator+=(const StepCounters& rhs) {
    gradient_evals += rhs.gradient_evals;
    hessian_evals += rhs.hessian_evals;
    matrix_function_builds += rhs.matrix_function_builds;
    modifier_applications += rhs.modifier_applications;
    solver_iterations += rhs.solver_iterations;
    return *this;
}

void SchemeConfig::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("SchemeConfig: h must be > 0");
    if (solver_tol < 1e-16 || solver_tol > 1e-6)
        throw std::invalid_argument("SchemeConfig: solver_tol must lie in [1e-16, 1e-6]");
    if (solver_max_iter < 1 || solver_max_iter > 500)
        throw std::invalid_argument("SchemeConfig: solver_max_iter must lie in [1, 500]");
}

FixedPointResult solve_fixed_point(const std::function<PhaseState(const PhaseState&)>& update_map,
                                   const PhaseState& y_guess, double tol, int max_iter,
                                   double damping) {
    PhaseState y = y_guess;
    double residual = std::numeric_limits<double>::infinity();
    double previous = residual;
    double best = residual;
    int stagnant = 0;
    bool newton = false;
    const std::size_t m = y.x.size();
    const int flat_dim = static_cast<int>(2 * m);

    for (int iter = 1; iter <= max_iter; ++iter) {
        const PhaseState gy = update_map(y);
        residual = residual_norm(y, gy);
        if (!std::isfinite(residual))
            throw NoConvergence("solve_fixed_point: iteration diverged to non-finite values",
                                iter, residual);
        best = std::min(best, residual);
        const double bound = tol * (1.0 + state_norm_inf(y));
        if (residual <= bound) {
            if (!newton && damping == 1.0) {
                // The next iterate is a contraction factor better and costs
                // nothing extra to adopt; the measured iterate already
                // certifies the bound.
                return FixedPointResult{gy, iter, residual};
            }
            return FixedPointResult{y, iter, residual};
        }

        if (!newton) {
            if (residual > 0.9 * previous) ++stagnant;
            previous = residual;
            // Switch to Newton on outright divergence or prolonged stagnation.
            if (residual > 100.0 * best || stagnant >= std::max(1, max_iter / 2)) {
                newton = true;
            } else {
                if (damping == 1.0) {
                    y = gy;
                } else {
                    for (std::size_t i = 0; i < m; ++i) {
                        y.x[i] += damping * (gy.x[i] - y.x[i]);
                        y.p[i] += damping * (gy.p[i] - y.p[i]);
                    }
                }
                continue;
            }
        }

        // Newton on R(y) = y - G(y) with a forward-difference Jacobian:
        // J_ij = delta_ij - (G_i(y + fd e_j) - G_i(y)) / fd.
        const Vector yf = y.flat();
        const Vector gf = gy.flat();
        Vector r(yf.size());
        for (std::size_t i = 0; i < yf.size(); ++i) r[i] = yf[i] - gf[i];
        const double fd = std::sqrt(std::numeric_limits<double>::epsilon()) *
                          (1.0 + state_norm_inf(y));
        std::vector<double> jac(yf.size() * yf.size());
        for (int j = 0; j < flat_dim; ++j) {
            Vector yp = yf;
            yp[static_cast<std::size_t>(j)] += fd;
            const Vector gp = update_map(PhaseState::from_flat(yp)).flat();
            for (int i = 0; i < flat_dim; ++i) {
                const double dg = (gp[static_cast<std::size_t>(i)] -
                                   gf[static_cast<std::size_t>(i)]) / fd;
                jac[static_cast<std::size_t>(i) * yf.size() + static_cast<std::size_t>(j)] =
                    (i == j ? 1.0 : 0.0) - dg;
            }
        }
        Vector delta;
        try {
            delta = solve_linear(std::move(jac), r);
        } catch (const NoConvergence&) {
            throw NoConvergence("solve_fixed_point: singular Newton system", iter, residual);
        }
        Vector ynew = yf;
        for (std::size_t i = 0; i < ynew.size(); ++i) ynew[i] -= delta[i];
        y = PhaseState::from_flat(ynew);
    }
    throw NoConvergence("solve_fixed_point: no convergence in " + std::to_string(max_iter) +
                            " iterations (residual " + std::to_string(residual) + ")",
                        max_iter, residual);
}

PhaseState avf_step(const HamiltonianSystem& sys, const DiscreteGradientSpec& dgrad,
                    const PhaseState& y0, double h, const SolverOptions& solver,
                    StepCounters& counters) {
    const std::size_t m = y0.x.size();
    const int evals = dgrad.evaluations_per_call();
    auto map = [&, h](const PhaseState& y) {
        const Vector g = avf_gradient(dgrad, y0.x, y.x);
        counters.gradient_evals += static_cast<std::uint64_t>(evals);
        PhaseState out = y0;
        for (std::size_t i = 0; i < m; ++i) {
            out.x[i] = y0.x[i] + 0.5 * h * (y0.p[i] + y.p[i]);
            out.p[i] = y0.p[i] - h * g[i];
        }
        return out;
    };
    const PhaseState guess = euler_predictor(sys, y0, h);
    const FixedPointResult res = solve_fixed_point(map, guess, solver.tol, solver.max_iter,
                                                   solver.damping);
    counters.solver_iterations += static_cast<std::uint64_t>(res.iterations);
    return res.y;
}

namespace {

// Shared driver for the separable locally exact schemes.  build_delta is
// called with the anchor position for the current iterate; LEX passes a
// constant matrix, SLEX rebuilds at the midpoint.
PhaseState locally_exact_separable_step(const HamiltonianSystem& sys,
                                        const DiscreteGradientSpec& dgrad, const PhaseState& y0,
                                        double h, const SolverOptions& solver,
                                        StepCounters& counters, bool midpoint_anchor) {
    const std::size_t m = y0.x.size();
    const int evals = dgrad.evaluations_per_call();

    SquareMatrix delta_fixed(1);
    if (!midpoint_anchor) {
        delta_fixed = delta_matrix(h, sys.potential.hessian(y0.x));
        counters.hessian_evals += 1;
        counters.matrix_function_builds += 1;
    }

    auto map = [&, h](const PhaseState& y) {
        const SquareMatrix* delta = &delta_fixed;
        SquareMatrix delta_mid(1);
        if (midpoint_anchor) {
            Vector xbar(m);
            for (std::size_t i = 0; i < m; ++i) xbar[i] = 0.5 * (y0.x[i] + y.x[i]);
            delta_mid = delta_matrix(h, sys.potential.hessian(xbar));
            counters.hessian_evals += 1;
            counters.matrix_function_builds += 1;
            delta = &delta_mid;
        }
        const Vector g = avf_gradient(dgrad, y0.x, y.x);
        counters.gradient_evals += static_cast<std::uint64_t>(evals);

        Vector pbar(m);
        for (std::size_t i = 0; i < m; ++i) pbar[i] = 0.5 * (y0.p[i] + y.p[i]);
        const Vector dx = (*delta) * pbar;
        // delta is symmetric, so delta^T g = delta g.
        const Vector dp = (*delta) * g;
        counters.modifier_applications += 2;

        PhaseState out = y0;
        for (std::size_t i = 0; i < m; ++i) {
            out.x[i] = y0.x[i] + dx[i];
            out.p[i] = y0.p[i] - dp[i];
        }
        return out;
    };

    const PhaseState guess = euler_predictor(sys, y0, h);
    const FixedPointResult res = solve_fixed_point(map, guess, solver.tol, solver.max_iter,
                                                   solver.damping);
    counters.solver_iterations += static_cast<std::uint64_t>(res.iterations);
    return res.y;
}

// General form: y1 = y0 + (Lambda S^-1) . (pbar, -gbar V).
PhaseState locally_exact_general_step(const HamiltonianSystem& sys,
                                      const DiscreteGradientSpec& dgrad, const PhaseState& y0,
                                      double h, const SolverOptions& solver,
                                      StepCounters& counters, bool midpoint_anchor,
                                      const SeriesSettings& series) {
    const std::size_t m = y0.x.size();
    const int evals = dgrad.evaluations_per_call();

    SquareMatrix half_fixed(1);
    if (!midpoint_anchor) {
        half_fixed = lambda_half_product(h, jacobian(sys, y0), series);
        counters.hessian_evals += 1;
        counters.matrix_function_builds += 1;
    }

    auto map = [&, h](const PhaseState& y) {
        const SquareMatrix* half = &half_fixed;
        SquareMatrix half_mid(1);
        if (midpoint_anchor) {
            PhaseState ybar = y0;
            for (std::size_t i = 0; i < m; ++i) {
                ybar.x[i] = 0.5 * (y0.x[i] + y.x[i]);
                ybar.p[i] = 0.5 * (y0.p[i] + y.p[i]);
            }
            half_mid = lambda_half_product(h, jacobian(sys, ybar), series);
            counters.hessian_evals += 1;
            counters.matrix_function_builds += 1;
            half = &half_mid;
        }
        const Vector g = avf_gradient(dgrad, y0.x, y.x);
        counters.gradient_evals += static_cast<std::uint64_t>(evals);

        Vector field(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            field[i] = 0.5 * (y0.p[i] + y.p[i]);
            field[m + i] = -g[i];
        }
        const Vector dy = (*half) * field;
        counters.modifier_applications += 2;

        PhaseState out = y0;
        for (std::size_t i = 0; i < m; ++i) {
            out.x[i] = y0.x[i] + dy[i];
            out.p[i] = y0.p[i] + dy[m + i];
        }
        return out;
    };

    const PhaseState guess = euler_predictor(sys, y0, h);
    const FixedPointResult res = solve_fixed_point(map, guess, solver.tol, solver.max_iter,
                                                   solver.damping);
    counters.solver_iterations += static_cast<std::uint64_t>(res.iterations);
    return res.y;
}

}  // namespace

PhaseState lex_step(const HamiltonianSystem& sys, const DiscreteGradientSpec& dgrad,
                    const PhaseState& y, double h, const SolverOptions& solver,
                    StepCounters& counters, SchemeForm form, const SeriesSettings& series) {
    if (form == SchemeForm::General)
        return locally_exact_general_step(sys, dgrad, y, h, solver, counters, false, series);
    return locally_exact_separable_step(sys, dgrad, y, h, solver, counters, false);
}

PhaseState slex_step(const HamiltonianSystem& sys, const DiscreteGradientSpec& dgrad,
                     const PhaseState& y, double h, const SolverOptions& solver,
                     StepCounters& counters, SchemeForm form, const SeriesSettings& series) {
    if (form == SchemeForm::General)
        return locally_exact_general_step(sys, dgrad, y, h, solver, counters, true, series);
    return locally_exact_separable_step(sys, dgrad, y, h, solver, counters, true);
}

PhaseState scheme_step(const HamiltonianSystem& sys, const SchemeConfig& config,
                       const PhaseState& y, double h, StepCounters& counters) {
    switch (config.scheme) {
        case Scheme::AVF:
            return avf_step(sys, config.dgrad, y, h, config.solver(), counters);
        case Scheme::LEX:
            return lex_step(sys, config.dgrad, y, h, config.solver(), counters, config.form,
                            config.matfun);
        case Scheme::SLEX:
            return slex_step(sys, config.dgrad, y, h, config.solver(), counters, config.form,
                             config.matfun);
    }
    throw std::logic_error("scheme_step: unknown scheme");
}

Trajectory integrate_trajectory(const HamiltonianSystem& sys, const SchemeConfig& config,
                                const PhaseState& y0, double t_end) {
    config.validate();
    if (t_end < 0.0) throw std::invalid_argument("integrate_trajectory: t_end must be >= 0");
    const double ratio = t_end / config.h;
    const auto n = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("integrate_trajectory: t_end must be an integer multiple of h");

    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.energies.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(y0);
    traj.energies.push_back(energy(sys, y0));

    PhaseState y = y0;
    for (std::size_t step = 0; step < n; ++step) {
        try {
            y = scheme_step(sys, config, y, config.h, traj.counters);
        } catch (const Error& e) {
            throw StepFailure("step " + std::to_string(step) + " failed: " + e.what(), step);
        }
        traj.times.push_back(static_cast<double>(step + 1) * config.h);
        traj.states.push_back(y);
        traj.energies.push_back(energy(sys, y));
    }
    return traj;
}

}  // namespace avf
