#pragma once

#include <optional>
#include <span>
#include <vector>

#include "avf/model.hpp"

namespace avf {

/// Tabulated Gauss-Legendre rule on [0, 1].
struct GaussLegendreRule {
    std::span<const double> nodes;
    std::span<const double> weights;
};

/// Node counts with tabulated rules: 2..16, 24, 32, 48, 64.
const std::vector<int>& gauss_legendre_tabulated_counts();

/// Rule lookup; throws std::invalid_argument for untabulated counts.
GaussLegendreRule gauss_legendre_rule(int node_count);

enum class DgradStrategy {
    ClosedKepler,
    ClosedAnharmonic,
    GaussLegendre,
};

/// Strategy for evaluating the average-vector-field discrete gradient
/// of the potential between two positions.
class DiscreteGradientSpec {
public:
    /// Closed form for the Kepler kind (exact).
    static DiscreteGradientSpec closed_kepler(PotentialModel potential);
    /// Closed Simpson form for the anharmonic kind (exact).
    static DiscreteGradientSpec closed_anharmonic(PotentialModel potential);
    /// Gauss-Legendre quadrature of the defining integral; exact only to
    /// quadrature error for non-polynomial potentials.  An optional check
    /// tolerance turns on a post-hoc certification of the discrete-gradient
    /// identity (throws QuadratureTolerance when violated).
    static DiscreteGradientSpec gauss_legendre(PotentialModel potential, int node_count = 8,
                                               std::optional<double> check_tolerance = {});

    /// The exact strategy for the potential kind when one exists, otherwise
    /// Gauss-Legendre with the default node count.
    static DiscreteGradientSpec preferred(PotentialModel potential);

    [[nodiscard]] DgradStrategy strategy() const { return strategy_; }
    [[nodiscard]] const PotentialModel& potential() const { return potential_; }
    [[nodiscard]] int node_count() const { return node_count_; }

    /// Evaluations of the gradient expression a single call performs: 1 for
    /// the closed forms, node_count for quadrature.
    [[nodiscard]] int evaluations_per_call() const;

private:
    DiscreteGradientSpec(DgradStrategy s, PotentialModel p) : strategy_(s), potential_(std::move(p)) {}

    DgradStrategy strategy_;
    PotentialModel potential_;
    int node_count_ = 8;
    std::optional<double> check_tolerance_;

    friend Vector avf_gradient(const DiscreteGradientSpec&, std::span<const double>,
                               std::span<const double>);
};

/// The AVF discrete gradient between positions x0 and x1, dispatching to the
/// strategy's closed form or quadrature.  Symmetric in its two points and
/// consistent: coincident points return grad V.
Vector avf_gradient(const DiscreteGradientSpec& spec, std::span<const double> x0,
                    std::span<const double> x1);

/// Closed-form AVF gradient of V(r) = -kappa/r:
///
///   kappa (x0/r0 + x1/r1) / (r0 r1 + x0.x1).
///
/// Throws AntipodalSingularity when the denominator falls below
/// 1e-10 * r0 r1 (the form has a genuine pole there).
Vector kepler_gradient_closed(double kappa, std::span<const double> x0,
                              std::span<const double> x1);

/// Closed-form AVF gradient of V(r) = alpha r^2 - beta r^4 via the Simpson
/// rule, exact because the integrand is cubic in the line parameter:
///
///   (grad V(x0) + 4 grad V(mid) + grad V(x1)) / 6.
Vector anharmonic_gradient_simpson(double alpha, double beta, std::span<const double> x0,
                                   std::span<const double> x1);

/// Residual of the defining discrete-gradient identity,
/// |gbar . (x1 - x0) - (V(x1) - V(x0))|.  Diagnostic only.
double dg_identity_residual(const DiscreteGradientSpec& spec, std::span<const double> x0,
                            std::span<const double> x1);

}  // namespace avf
