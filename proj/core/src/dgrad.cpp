#include "avf/dgrad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace avf {

namespace {

constexpr double kAntipodalEps = 1e-10;

}  // namespace

DiscreteGradientSpec DiscreteGradientSpec::closed_kepler(PotentialModel potential) {
    if (potential.kind() != PotentialKind::Kepler)
        throw std::invalid_argument("ClosedKepler strategy requires a Kepler potential");
    return DiscreteGradientSpec(DgradStrategy::ClosedKepler, std::move(potential));
}

DiscreteGradientSpec DiscreteGradientSpec::closed_anharmonic(PotentialModel potential) {
    if (potential.kind() != PotentialKind::Anharmonic)
        throw std::invalid_argument("ClosedAnharmonic strategy requires an anharmonic potential");
    return DiscreteGradientSpec(DgradStrategy::ClosedAnharmonic, std::move(potential));
}

DiscreteGradientSpec DiscreteGradientSpec::gauss_legendre(PotentialModel potential, int node_count,
                                                          std::optional<double> check_tolerance) {
    if (node_count < 2 || node_count > 64)
        throw std::invalid_argument("GaussLegendre node count must lie in [2, 64]");
    gauss_legendre_rule(node_count);  // reject untabulated counts
    DiscreteGradientSpec spec(DgradStrategy::GaussLegendre, std::move(potential));
    spec.node_count_ = node_count;
    spec.check_tolerance_ = check_tolerance;
    return spec;
}

DiscreteGradientSpec DiscreteGradientSpec::preferred(PotentialModel potential) {
    switch (potential.kind()) {
        case PotentialKind::Kepler:
            return closed_kepler(std::move(potential));
        case PotentialKind::Anharmonic:
            return closed_anharmonic(std::move(potential));
        default:
            return gauss_legendre(std::move(potential));
    }
}

int DiscreteGradientSpec::evaluations_per_call() const {
    return strategy_ == DgradStrategy::GaussLegendre ? node_count_ : 1;
}

Vector kepler_gradient_closed(double kappa, std::span<const double> x0,
                              std::span<const double> x1) {
    const double r0 = norm2(x0);
    const double r1 = norm2(x1);
    if (r0 <= 0.0 || r1 <= 0.0)
        throw SingularPoint("kepler_gradient_closed: endpoint at the origin");
    const double denom = r0 * r1 + dot(x0, x1);
    if (denom <= kAntipodalEps * r0 * r1)
        throw AntipodalSingularity(
            "kepler_gradient_closed: endpoints antipodal through the origin (denominator " +
            std::to_string(denom) + ")");
    Vector g(x0.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = kappa * (x0[i] / r0 + x1[i] / r1) / denom;
    return g;
}

Vector anharmonic_gradient_simpson(double alpha, double beta, std::span<const double> x0,
                                   std::span<const double> x1) {
    const PotentialModel v = PotentialModel::anharmonic(alpha, beta, static_cast<int>(x0.size()));
    Vector mid(x0.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (x0[i] + x1[i]);
    const Vector g0 = v.gradient(x0);
    const Vector gm = v.gradient(mid);
    const Vector g1 = v.gradient(x1);
    Vector g(x0.size());
    // Endpoint terms grouped first so swapping x0 and x1 is bitwise neutral.
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = ((g0[i] + g1[i]) + 4.0 * gm[i]) / 6.0;
    return g;
}

Vector avf_gradient(const DiscreteGradientSpec& spec, std::span<const double> x0,
                    std::span<const double> x1) {
    if (x0.size() != x1.size() || static_cast<int>(x0.size()) != spec.potential().dim())
        throw std::invalid_argument("avf_gradient: dimension mismatch");

    Vector g;
    switch (spec.strategy()) {
        case DgradStrategy::ClosedKepler:
            g = kepler_gradient_closed(spec.potential().kappa(), x0, x1);
            break;
        case DgradStrategy::ClosedAnharmonic:
            g = anharmonic_gradient_simpson(spec.potential().alpha(), spec.potential().beta(), x0, x1);
            break;
        case DgradStrategy::GaussLegendre: {
            const GaussLegendreRule rule = gauss_legendre_rule(spec.node_count_);
            g.assign(x0.size(), 0.0);
            Vector point(x0.size());
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double xi = rule.nodes[k];
                for (std::size_t i = 0; i < point.size(); ++i)
                    point[i] = x0[i] + xi * (x1[i] - x0[i]);
                const Vector gk = spec.potential().gradient(point);
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += rule.weights[k] * gk[i];
            }
            if (spec.check_tolerance_) {
                double lhs = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) lhs += g[i] * (x1[i] - x0[i]);
                const double v0 = spec.potential().value(x0);
                const double v1 = spec.potential().value(x1);
                const double scale = std::abs(v0) + std::abs(v1) + 1.0;
                if (std::abs(lhs - (v1 - v0)) > *spec.check_tolerance_ * scale)
                    throw QuadratureTolerance(
                        "avf_gradient: Gauss-Legendre(" + std::to_string(spec.node_count_) +
                        ") identity residual " + std::to_string(std::abs(lhs - (v1 - v0))) +
                        " exceeds the certification tolerance");
            }
            break;
        }
    }
    return g;
}

double dg_identity_residual(const DiscreteGradientSpec& spec, std::span<const double> x0,
                            std::span<const double> x1) {
    const Vector g = avf_gradient(spec, x0, x1);
    double lhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) lhs += g[i] * (x1[i] - x0[i]);
    return std::abs(lhs - (spec.potential().value(x1) - spec.potential().value(x0)));
}

}  // namespace avf
