#include "avf/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace avf {

namespace {

constexpr double kKeplerRadiusCutoff = 1e-12;
constexpr double kFdGradientStep = 1e-6;
constexpr double kFdHessianStep = 1e-4;

void check_finite(std::span<const double> v, const char* what) {
    for (double e : v)
        if (!std::isfinite(e)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

PhaseState::PhaseState(Vector x_in, Vector p_in) : x(std::move(x_in)), p(std::move(p_in)) {
    if (x.size() != p.size() || x.empty())
        throw std::invalid_argument("PhaseState: x and p must have equal dimension >= 1");
    check_finite(x, "PhaseState.x");
    check_finite(p, "PhaseState.p");
}

Vector PhaseState::flat() const {
    Vector y;
    y.reserve(x.size() * 2);
    y.insert(y.end(), x.begin(), x.end());
    y.insert(y.end(), p.begin(), p.end());
    return y;
}

PhaseState PhaseState::from_flat(std::span<const double> y) {
    const std::size_t m = y.size() / 2;
    return PhaseState(Vector(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m)),
                      Vector(y.begin() + static_cast<std::ptrdiff_t>(m), y.end()));
}

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

PotentialModel PotentialModel::kepler(double kappa, int dim) {
    if (kappa <= 0.0) throw std::invalid_argument("PotentialModel::kepler: kappa must be > 0");
    if (dim < 1) throw std::invalid_argument("PotentialModel: dim must be >= 1");
    PotentialModel p(PotentialKind::Kepler, dim);
    p.param_a_ = kappa;
    return p;
}

PotentialModel PotentialModel::anharmonic(double alpha, double beta, int dim) {
    if (dim < 1) throw std::invalid_argument("PotentialModel: dim must be >= 1");
    PotentialModel p(PotentialKind::Anharmonic, dim);
    p.param_a_ = alpha;
    p.param_b_ = beta;
    return p;
}

PotentialModel PotentialModel::radial_power(double coefficient, double exponent, int dim) {
    if (dim < 1) throw std::invalid_argument("PotentialModel: dim must be >= 1");
    PotentialModel p(PotentialKind::RadialPower, dim);
    p.param_a_ = coefficient;
    p.param_b_ = exponent;
    return p;
}

PotentialModel PotentialModel::general(ValueFn v, int dim, GradientFn gradient,
                                       HessianFn hessian) {
    if (dim < 1) throw std::invalid_argument("PotentialModel: dim must be >= 1");
    if (!v) throw std::invalid_argument("PotentialModel::general: empty callable");
    PotentialModel p(PotentialKind::GeneralCallable, dim);
    p.callable_ = std::move(v);
    p.gradient_fn_ = std::move(gradient);
    p.hessian_fn_ = std::move(hessian);
    return p;
}

double PotentialModel::radius_checked(std::span<const double> x) const {
    const double r = norm2(x);
    if (kind_ == PotentialKind::Kepler && r < kKeplerRadiusCutoff)
        throw SingularPoint("Kepler potential evaluated within " + std::to_string(kKeplerRadiusCutoff) +
                            " of the origin");
    if (kind_ == PotentialKind::RadialPower && param_b_ < 2.0 && r < kKeplerRadiusCutoff)
        throw SingularPoint("radial power potential with exponent < 2 evaluated at the origin");
    return r;
}

double PotentialModel::radial_value(double r) const {
    switch (kind_) {
        case PotentialKind::Kepler:
            return -param_a_ / r;
        case PotentialKind::Anharmonic:
            return param_a_ * r * r - param_b_ * r * r * r * r;
        case PotentialKind::RadialPower:
            return param_a_ * std::pow(r, param_b_);
        case PotentialKind::GeneralCallable:
            break;
    }
    throw DerivativeUnavailable("radial_value: potential is not radial");
}

double PotentialModel::radial_derivative(double r, int order) const {
    if (order < 1 || order > 4)
        throw std::invalid_argument("radial_derivative: order must be 1..4");
    switch (kind_) {
        case PotentialKind::Kepler: {
            // V = -kappa r^-1: derivatives kappa r^-2, -2 kappa r^-3, ...
            const double k = param_a_;
            switch (order) {
                case 1: return k / (r * r);
                case 2: return -2.0 * k / (r * r * r);
                case 3: return 6.0 * k / (r * r * r * r);
                default: return -24.0 * k / (r * r * r * r * r);
            }
        }
        case PotentialKind::Anharmonic: {
            const double a = param_a_, b = param_b_;
            switch (order) {
                case 1: return 2.0 * a * r - 4.0 * b * r * r * r;
                case 2: return 2.0 * a - 12.0 * b * r * r;
                case 3: return -24.0 * b * r;
                default: return -24.0 * b;
            }
        }
        case PotentialKind::RadialPower: {
            const double c = param_a_, n = param_b_;
            double f = c;
            for (int k = 0; k < order; ++k) f *= (n - k);
            return f * std::pow(r, n - order);
        }
        case PotentialKind::GeneralCallable:
            break;
    }
    throw DerivativeUnavailable("radial_derivative: potential is not radial");
}

double PotentialModel::value(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("PotentialModel::value: dimension mismatch");
    if (kind_ == PotentialKind::GeneralCallable) return callable_(x);
    return radial_value(radius_checked(x));
}

Vector PotentialModel::gradient(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("PotentialModel::gradient: dimension mismatch");
    Vector g(x.size());
    if (kind_ == PotentialKind::GeneralCallable) {
        if (gradient_fn_) return gradient_fn_(x);
        Vector xp(x.begin(), x.end());
        const double scale = std::max(1.0, norm2(x));
        const double step = kFdGradientStep * scale;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xi = xp[i];
            xp[i] = xi + step;
            const double vp = callable_(xp);
            xp[i] = xi - step;
            const double vm = callable_(xp);
            xp[i] = xi;
            g[i] = (vp - vm) / (2.0 * step);
        }
        return g;
    }
    const double r = radius_checked(x);
    const double w = radial_derivative(r, 1) / r;  // grad V = V'(r) x / r
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = w * x[i];
    return g;
}

SquareMatrix PotentialModel::hessian(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("PotentialModel::hessian: dimension mismatch");
    const int m = dim_;
    SquareMatrix h(m);
    if (kind_ == PotentialKind::GeneralCallable) {
        if (hessian_fn_) {
            h = hessian_fn_(x);
            h.assert_symmetric();
            return h;
        }
        Vector xp(x.begin(), x.end());
        const double scale = std::max(1.0, norm2(x));
        const double step = kFdHessianStep * scale;
        for (int i = 0; i < m; ++i) {
            const double xi = xp[static_cast<std::size_t>(i)];
            xp[static_cast<std::size_t>(i)] = xi + step;
            Vector gp = gradient(xp);
            xp[static_cast<std::size_t>(i)] = xi - step;
            Vector gm = gradient(xp);
            xp[static_cast<std::size_t>(i)] = xi;
            for (int j = 0; j < m; ++j)
                h(i, j) = (gp[static_cast<std::size_t>(j)] - gm[static_cast<std::size_t>(j)]) / (2.0 * step);
        }
        // Symmetrize away the finite-difference asymmetry before tagging.
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) h(i, j) = h(j, i) = 0.5 * (h(i, j) + h(j, i));
        h.assert_symmetric();
        return h;
    }
    // Vxx = a2 u u^T + b2 I with a2 = V'' - V'/r, b2 = V'/r.
    const double r = radius_checked(x);
    const double b2 = radial_derivative(r, 1) / r;
    const double a2 = radial_derivative(r, 2) - b2;
    for (int i = 0; i < m; ++i) {
        const double ui = x[static_cast<std::size_t>(i)] / r;
        for (int j = i; j < m; ++j) {
            const double uj = x[static_cast<std::size_t>(j)] / r;
            h(i, j) = h(j, i) = a2 * ui * uj + (i == j ? b2 : 0.0);
        }
    }
    h.assert_symmetric();
    return h;
}

Vector PotentialModel::third_directional(std::span<const double> x, std::span<const double> a,
                                         std::span<const double> b) const {
    if (kind_ == PotentialKind::GeneralCallable)
        throw DerivativeUnavailable("third derivatives unavailable for general callables");
    // V,_{ijk} = a3 u_i u_j u_k + b3 (d_ij u_k + d_ik u_j + d_jk u_i),
    // a3 = V''' - 3 b3 r / r ... = V''' - 3 (V'' - V'/r)/r, b3 = (V'' - V'/r)/r.
    const double r = radius_checked(x);
    const double b2 = radial_derivative(r, 1) / r;
    const double a2 = radial_derivative(r, 2) - b2;
    const double b3 = a2 / r;
    const double a3 = radial_derivative(r, 3) - 3.0 * b3;

    const std::size_t m = x.size();
    Vector u(m);
    for (std::size_t i = 0; i < m; ++i) u[i] = x[i] / r;
    const double ua = dot(u, a);
    const double ub = dot(u, b);
    const double ab = dot(a, b);

    Vector out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = (a3 * ua * ub + b3 * ab) * u[i] + b3 * (ub * a[i] + ua * b[i]);
    return out;
}

Vector PotentialModel::fourth_directional(std::span<const double> x, std::span<const double> a,
                                          std::span<const double> b,
                                          std::span<const double> c) const {
    if (kind_ == PotentialKind::GeneralCallable)
        throw DerivativeUnavailable("fourth derivatives unavailable for general callables");
    // V,_{ijkl} = a4 uuuu + b4 (six delta-uu pairings) + c4 (three delta-delta pairings).
    const double r = radius_checked(x);
    const double b2 = radial_derivative(r, 1) / r;
    const double a2 = radial_derivative(r, 2) - b2;
    const double b3 = a2 / r;
    const double a3 = radial_derivative(r, 3) - 3.0 * b3;
    const double b4 = a3 / r;
    const double c4 = b3 / r;
    const double a4 = radial_derivative(r, 4) - 6.0 * radial_derivative(r, 3) / r +
                      15.0 * radial_derivative(r, 2) / (r * r) -
                      15.0 * radial_derivative(r, 1) / (r * r * r);

    const std::size_t m = x.size();
    Vector u(m);
    for (std::size_t i = 0; i < m; ++i) u[i] = x[i] / r;
    const double ua = dot(u, a), ub = dot(u, b), uc = dot(u, c);
    const double ab = dot(a, b), ac = dot(a, c), bc = dot(b, c);

    Vector out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = (a4 * ua * ub * uc + b4 * (ua * bc + ub * ac + uc * ab)) * u[i] +
                 (b4 * ub * uc + c4 * bc) * a[i] + (b4 * ua * uc + c4 * ac) * b[i] +
                 (b4 * ua * ub + c4 * ab) * c[i];
    }
    return out;
}

double energy(const HamiltonianSystem& sys, const PhaseState& y) {
    return 0.5 * dot(y.p, y.p) + sys.potential.value(y.x);
}

PhaseState vector_field(const HamiltonianSystem& sys, const PhaseState& y) {
    Vector g = sys.potential.gradient(y.x);
    for (double& e : g) e = -e;
    return PhaseState(y.p, std::move(g));
}

SquareMatrix jacobian(const HamiltonianSystem& sys, const PhaseState& y) {
    const int m = sys.dim();
    const SquareMatrix vxx = sys.potential.hessian(y.x);
    SquareMatrix j(2 * m);
    for (int i = 0; i < m; ++i) {
        j(i, m + i) = 1.0;
        for (int k = 0; k < m; ++k) j(m + i, k) = -vxx(i, k);
    }
    return j;
}

SquareMatrix symplectic_matrix(int m) {
    SquareMatrix s(2 * m);
    for (int i = 0; i < m; ++i) {
        s(i, m + i) = 1.0;
        s(m + i, i) = -1.0;
    }
    return s;
}

}  // namespace avf
