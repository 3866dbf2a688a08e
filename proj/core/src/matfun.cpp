#include "avf/matfun.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace avf {

namespace {

constexpr int kSeriesTerms = 48;

// phi(z) = sum c_k z^k with c_0 = 1 and, from tan' = 1 + tan^2,
// c_k = (sum_{i=0}^{k-1} c_i c_{k-1-i}) / (2k + 1).
std::array<double, kSeriesTerms> build_phi_series() {
    std::array<double, kSeriesTerms> c{};
    c[0] = 1.0;
    for (int k = 1; k < kSeriesTerms; ++k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += c[i] * c[k - 1 - i];
        c[k] = s / (2.0 * k + 1.0);
    }
    return c;
}

const std::array<double, kSeriesTerms>& phi_series() {
    static const std::array<double, kSeriesTerms> c = build_phi_series();
    return c;
}

// Power-iteration estimate of the spectral radius; a handful of iterations
// is enough for the guard's coarse 1.5 threshold.
double estimate_spectral_radius(const SquareMatrix& m) {
    const int n = m.dim();
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = 1.0 / (1.0 + i);
    double rho = 0.0;
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<double> w = m * v;
        double norm = 0.0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        if (norm == 0.0) return 0.0;
        rho = norm;
        for (double& x : w) x /= norm;
        v = std::move(w);
    }
    return rho;
}

}  // namespace

std::span<const double> phi_series_coefficients() {
    const auto& c = phi_series();
    return {c.data(), c.size()};
}

double phi_tanc(double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("phi_tanc: non-finite argument");
    if (z >= kPhiPoleZ * (1.0 - 1e-8))
        throw PoleProximity("phi_tanc: argument " + std::to_string(z) +
                            " too close to the tan pole at (pi/2)^2");
    if (std::abs(z) < 0.01) {
        // Series truncated at z^7; the z^8 term is below 6e-20 here.
        const auto& c = phi_series();
        double acc = 0.0;
        for (int k = 7; k >= 0; --k) acc = acc * z + c[k];
        return acc;
    }
    if (z > 0.0) {
        const double x = std::sqrt(z);
        return std::tan(x) / x;
    }
    const double x = std::sqrt(-z);
    return std::tanh(x) / x;
}

SquareMatrix delta_matrix(double h, const SquareMatrix& vxx) {
    SquareMatrix a = vxx;
    if (!a.symmetric_flag()) a.assert_symmetric();
    const EigenDecomposition dec = sym_eigen(a);
    const int n = a.dim();
    const double scale = (h / 2.0) * (h / 2.0);

    std::vector<double> phis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        phis[static_cast<std::size_t>(i)] = phi_tanc(scale * dec.eigenvalues[static_cast<std::size_t>(i)]);

    // delta = h * Q diag(phi) Q^T; symmetric by construction.
    SquareMatrix out(n);
    const SquareMatrix& q = dec.eigenvectors;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += q(i, k) * phis[static_cast<std::size_t>(k)] * q(j, k);
            out(i, j) = out(j, i) = h * s;
        }
    }
    out.assert_symmetric();
    return out;
}

SquareMatrix lambda_half_product(double h, const SquareMatrix& fprime,
                                 const SeriesSettings& settings) {
    const int n = fprime.dim();
    // M = (h/2)^2 (F')^2; phi(-M) = sum c_k (-1)^k M^k.
    SquareMatrix m = fprime * fprime;
    m *= (h / 2.0) * (h / 2.0);

    const double rho = estimate_spectral_radius(m);
    if (rho > settings.spectral_radius_limit)
        throw SeriesDivergence("lambda_half_product: spectral radius estimate " +
                               std::to_string(rho) + " exceeds the safe series radius " +
                               std::to_string(settings.spectral_radius_limit));

    const auto& c = phi_series();
    SquareMatrix acc = SquareMatrix::identity(n);
    SquareMatrix power = SquareMatrix::identity(n);
    double sign = 1.0;
    bool converged = false;
    for (int k = 1; k < settings.max_terms; ++k) {
        power = power * m;
        sign = -sign;
        SquareMatrix term = power * (sign * c[static_cast<std::size_t>(k)]);
        acc += term;
        if (term.max_abs() < settings.term_tolerance * acc.max_abs()) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SeriesDivergence("lambda_half_product: series did not meet the term bound within " +
                               std::to_string(settings.max_terms) + " terms");
    acc *= h;
    return acc;
}

}  // namespace avf
