#pragma once

#include <array>
#include <vector>

#include "avf/integrate.hpp"
#include "avf/model.hpp"

namespace avf {

/// A circular orbit of a radial potential: radius R in the plane spanned by
/// two orthonormal vectors, speed v = sqrt(R V'(R)), period 2 pi R / v.
struct CircularOrbitSpec {
    PotentialModel potential;
    double radius = 0.0;
    Vector plane_e1;
    Vector plane_e2;

    /// Orbit in the first two coordinate axes.
    static CircularOrbitSpec axis_aligned(PotentialModel potential, double radius);

    /// Throws NoCircularOrbit when R V'(R) <= 0.
    [[nodiscard]] double speed() const;
    [[nodiscard]] double period() const;
    [[nodiscard]] double angular_rate() const { return speed() / radius; }
};

/// Initial state (R e1, v e2) and the orbital period.
std::pair<PhaseState, double> circular_orbit_state(const CircularOrbitSpec& spec);

/// Uniform rotation at angular rate v/R; the reference solution for the
/// convergence experiments.
PhaseState exact_circular_solution(const CircularOrbitSpec& spec, double t);

/// Taylor coefficients of the exact flow x(t+h) = x + sum a_k h^k,
/// p(t+h) = p + sum b_k h^k through order 4.
struct TaylorCoefficients {
    std::array<Vector, 4> a;
    std::array<Vector, 4> b;

    [[nodiscard]] PhaseState evaluate(const PhaseState& y, double h) const;
};

/// The order-4 expansion of the exact solution:
///   a1 = p, b1 = -grad V, a2 = -grad V / 2, b2 = -Vxx p / 2,
///   a3 = -Vxx p / 6, b3 = (Vxx grad V - V3(p,p)) / 6,
///   a4 = (Vxx grad V - V3(p,p)) / 24,
///   b4 = V3(grad V, p)/8 + Vxx Vxx p / 24 - V4(p,p,p) / 24.
/// Requires potential derivatives through order 4 (analytic radial kinds);
/// throws DerivativeUnavailable otherwise.
TaylorCoefficients taylor_exact_coeffs(const HamiltonianSystem& sys, const PhaseState& y);

/// Classical RK4 flow over time t with n substeps; the high-accuracy
/// reference used by local-error ladders when no analytic solution exists.
/// Independent of the discrete-gradient step implementations.
PhaseState reference_flow_rk4(const HamiltonianSystem& sys, const PhaseState& y0, double t,
                              int substeps);

enum class ErrorNorm { Phase, Position };

/// Euclidean distance in R^{2m} (or position block only) between the
/// trajectory endpoint and the exact circular solution at the same time.
/// Throws TimeMismatch when the endpoint time differs from t_expected.
double global_error(const Trajectory& traj, const CircularOrbitSpec& spec, double t_expected,
                    ErrorNorm norm = ErrorNorm::Phase);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    /// Root-mean-square residual of the least-squares line in log space.
    double residual = 0.0;
};

/// Least-squares slope of log(error) against log(h).  Throws DegenerateFit
/// for fewer than three points, non-positive errors, duplicate step sizes,
/// or a step-size span under a factor of two.
FitResult fit_order(const std::vector<std::pair<double, double>>& h_and_error);

/// Weights of the evaluation-count cost model, in units of one gradient
/// evaluation.  The radial closed-form Hessian reuses the gradient's radius
/// intermediates and the small eigendecomposition warm-starts, so both sit
/// below a full gradient expression.  Configurable and echoed in the JSON
/// output; the defaults put the locally exact schemes at the observed cost
/// factors ~1.8 (LEX, once-per-step Hessian/build) and 3.0 (SLEX, rebuilt
/// every solver iteration) against plain AVF.
struct CostWeights {
    double gradient = 1.0;
    double hessian = 0.75;
    double matrix_build = 0.65;
    double modifier_apply = 0.3;
};

/// Weighted evaluation count.
double weighted_cost(const StepCounters& counters, const CostWeights& weights);

/// Cost-matched scaled step: h~ = h * cost(scheme) / cost(AVF baseline),
/// both trajectories spanning the same time interval.  Throws ZeroCost when
/// the baseline cost vanishes.
double cost_scaled_step(const StepCounters& traj_counters, const StepCounters& baseline_counters,
                        double h, const CostWeights& weights = {});

/// Per-scheme convergence summary over a ladder of step sizes.
struct ConvergenceReport {
    Scheme scheme = Scheme::AVF;
    std::vector<double> h;
    std::vector<double> h_scaled;
    std::vector<double> errors;
    std::vector<StepCounters> counters;
    FitResult fit;
};

}  // namespace avf
