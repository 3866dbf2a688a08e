#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "avf/dgrad.hpp"
#include "avf/matfun.hpp"
#include "avf/model.hpp"

namespace avf {

enum class Scheme { AVF, LEX, SLEX };
enum class SchemeForm {
    Separable,  // delta_n on the position/momentum split, Vxx-sized matrices
    General,    // full 2m x 2m Lambda_n modifier
};

const char* scheme_name(Scheme s);

/// Evaluation counts accumulated over steps; monotone nondecreasing.
/// gradient_evals counts discrete-gradient expression evaluations (one per
/// closed-form call, node_count per quadrature call); hessian_evals and
/// matrix_function_builds count Vxx evaluations and modifier constructions;
/// modifier_applications counts modifier-matrix/vector products inside the
/// implicit solve.
struct StepCounters {
    std::uint64_t gradient_evals = 0;
    std::uint64_t hessian_evals = 0;
    std::uint64_t matrix_function_builds = 0;
    std::uint64_t modifier_applications = 0;
    std::uint64_t solver_iterations = 0;

    StepCounters& operator+=(const StepCounters& rhs);
};

struct SolverOptions {
    double tol = 1e-14;
    int max_iter = 200;
    /// Fixed-point damping; 1.0 is the plain iteration.
    double damping = 1.0;
};

/// One-step scheme configuration.
struct SchemeConfig {
    Scheme scheme = Scheme::AVF;
    SchemeForm form = SchemeForm::Separable;
    double h = 0.0;
    double solver_tol = 1e-14;
    int solver_max_iter = 200;
    DiscreteGradientSpec dgrad;
    SeriesSettings matfun;

    [[nodiscard]] SolverOptions solver() const { return SolverOptions{solver_tol, solver_max_iter, 1.0}; }

    /// Enforces h > 0, solver_tol in [1e-16, 1e-6], solver_max_iter in [1, 500].
    void validate() const;
};

struct FixedPointResult {
    PhaseState y;
    int iterations = 0;
    double residual = 0.0;
};

/// Solves y = update_map(y) by damped fixed-point iteration with a
/// finite-difference Newton fallback once the iteration stagnates for
/// max_iter/2 rounds.  The returned state satisfies
/// ||y - update_map(y)||_inf <= tol * (1 + ||y||_inf); otherwise
/// NoConvergence(iterations, last_residual) is thrown.
FixedPointResult solve_fixed_point(const std::function<PhaseState(const PhaseState&)>& update_map,
                                   const PhaseState& y_guess, double tol, int max_iter,
                                   double damping = 1.0);

/// One step of the plain AVF scheme:
///   (x1 - x0)/h = (p0 + p1)/2,  (p1 - p0)/h = -gbar V(x0, x1).
PhaseState avf_step(const HamiltonianSystem& sys, const DiscreteGradientSpec& dgrad,
                    const PhaseState& y, double h, const SolverOptions& solver,
                    StepCounters& counters);

/// One step of AVF-LEX: the step matrix delta_n = h tanc(h Omega_n / 2) with
/// Omega_n^2 = Vxx(x_n) is built once per step (the anchor is explicit).
PhaseState lex_step(const HamiltonianSystem& sys, const DiscreteGradientSpec& dgrad,
                    const PhaseState& y, double h, const SolverOptions& solver,
                    StepCounters& counters, SchemeForm form = SchemeForm::Separable,
                    const SeriesSettings& series = {});

/// One step of AVF-SLEX: delta_n is anchored at the step midpoint and rebuilt
/// from the current iterate inside every solver iteration.
PhaseState slex_step(const HamiltonianSystem& sys, const DiscreteGradientSpec& dgrad,
                     const PhaseState& y, double h, const SolverOptions& solver,
                     StepCounters& counters, SchemeForm form = SchemeForm::Separable,
                     const SeriesSettings& series = {});

/// Dispatch on config.scheme/config.form with an explicit step size (the
/// reversibility tests drive steps with -h).
PhaseState scheme_step(const HamiltonianSystem& sys, const SchemeConfig& config,
                       const PhaseState& y, double h, StepCounters& counters);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<double> energies;
    StepCounters counters;

    [[nodiscard]] std::size_t step_count() const { return times.empty() ? 0 : times.size() - 1; }
    [[nodiscard]] const PhaseState& final_state() const { return states.back(); }
    [[nodiscard]] double final_time() const { return times.back(); }
};

/// Fixed-step driver: t_end must be an integer multiple of config.h.  Step
/// errors are rethrown as StepFailure with the failing step index attached.
Trajectory integrate_trajectory(const HamiltonianSystem& sys, const SchemeConfig& config,
                                const PhaseState& y0, double t_end);

}  // namespace avf
