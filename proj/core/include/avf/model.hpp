#pragma once

#include <functional>
#include <span>
#include <vector>

#include "avf/matrix.hpp"

namespace avf {

using Vector = std::vector<double>;

/// Position/momentum pair (x, p) in R^m x R^m, unit mass.
struct PhaseState {
    Vector x;
    Vector p;

    PhaseState() = default;
    PhaseState(Vector x, Vector p);

    [[nodiscard]] int dim() const { return static_cast<int>(x.size()); }

    /// Concatenated (x, p) as one flat vector of length 2m.
    [[nodiscard]] Vector flat() const;
    static PhaseState from_flat(std::span<const double> y);
};

double norm_inf(std::span<const double> v);
double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

enum class PotentialKind {
    Kepler,       // V(r) = -kappa / r
    Anharmonic,   // V(r) = alpha r^2 - beta r^4
    RadialPower,  // V(r) = c r^n
    GeneralCallable,
};

/// Potential V(x) with analytic derivatives for the radial kinds and
/// finite-difference fallbacks for general callables.  Immutable after
/// construction and freely shareable across threads.
class PotentialModel {
public:
    using ValueFn = std::function<double(std::span<const double>)>;
    using GradientFn = std::function<Vector(std::span<const double>)>;
    using HessianFn = std::function<SquareMatrix(std::span<const double>)>;

    static PotentialModel kepler(double kappa, int dim = 3);
    static PotentialModel anharmonic(double alpha, double beta, int dim = 3);
    static PotentialModel radial_power(double coefficient, double exponent, int dim = 3);
    /// General potential from callables.  Analytic gradient/Hessian callbacks
    /// are used when supplied; otherwise derivatives come from central finite
    /// differences (relative steps 1e-6 for the gradient, 1e-4 for the
    /// Hessian).  Only orders <= 2 are available either way.
    static PotentialModel general(ValueFn v, int dim, GradientFn gradient = {},
                                  HessianFn hessian = {});

    [[nodiscard]] PotentialKind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] bool is_radial() const { return kind_ != PotentialKind::GeneralCallable; }

    [[nodiscard]] double kappa() const { return param_a_; }
    [[nodiscard]] double alpha() const { return param_a_; }
    [[nodiscard]] double beta() const { return param_b_; }

    [[nodiscard]] double value(std::span<const double> x) const;
    [[nodiscard]] Vector gradient(std::span<const double> x) const;
    [[nodiscard]] SquareMatrix hessian(std::span<const double> x) const;

    /// Directional third derivative, component gamma of V,_{gamma mu nu} a^mu b^nu.
    [[nodiscard]] Vector third_directional(std::span<const double> x, std::span<const double> a,
                                           std::span<const double> b) const;
    /// Directional fourth derivative, V,_{gamma mu nu sigma} a^mu b^nu c^sigma.
    [[nodiscard]] Vector fourth_directional(std::span<const double> x, std::span<const double> a,
                                            std::span<const double> b,
                                            std::span<const double> c) const;

    /// d^order V / dr^order for radial kinds, order in 1..4.
    [[nodiscard]] double radial_derivative(double r, int order) const;
    [[nodiscard]] double radial_value(double r) const;

private:
    PotentialModel(PotentialKind kind, int dim) : kind_(kind), dim_(dim) {}

    [[nodiscard]] double radius_checked(std::span<const double> x) const;

    PotentialKind kind_;
    int dim_;
    double param_a_ = 0.0;  // kappa / alpha / coefficient
    double param_b_ = 0.0;  // beta / exponent
    ValueFn callable_;
    GradientFn gradient_fn_;
    HessianFn hessian_fn_;
};

/// Separable Hamiltonian H = p^2/2 + V(x); the kinetic form is fixed.
struct HamiltonianSystem {
    PotentialModel potential;

    [[nodiscard]] int dim() const { return potential.dim(); }
};

double energy(const HamiltonianSystem& sys, const PhaseState& y);

/// F(y) = S grad H = (p, -V_x).
PhaseState vector_field(const HamiltonianSystem& sys, const PhaseState& y);

/// The 2m x 2m Jacobian F' = [[0, I], [-Vxx, 0]].
SquareMatrix jacobian(const HamiltonianSystem& sys, const PhaseState& y);

/// The canonical symplectic matrix S = [[0, I], [-I, 0]] of size 2m.
SquareMatrix symplectic_matrix(int m);

}  // namespace avf
