#pragma once

#include <span>

#include "avf/matrix.hpp"

namespace avf {

/// Square of the tan pole location: phi has a pole at z = (pi/2)^2.
inline constexpr double kPhiPoleZ = 2.467401100272339654708622749969;

/// The even-analytic extension covering tanc and tanhc:
///
///   phi(z) = tan(sqrt(z))/sqrt(z)    for z > 0,
///   phi(z) = tanh(sqrt(-z))/sqrt(-z) for z < 0,
///   phi(0) = 1,
///
/// with power series 1 + z/3 + 2 z^2/15 + 17 z^3/315 + ... valid on both
/// signs.  Throws PoleProximity for z >= (pi/2)^2 (1 - 1e-8).
double phi_tanc(double z);

/// Coefficients of the phi power series, phi(z) = sum_k coeff[k] z^k.
/// At least 45 terms are provided.
std::span<const double> phi_series_coefficients();

/// Step modifier for the separable locally exact schemes:
///
///   delta = h * phi((h/2)^2 * Vxx),
///
/// evaluated exactly through the symmetric eigendecomposition of Vxx.
/// All scaled eigenvalues must stay clear of the tan pole; PoleProximity
/// is thrown otherwise (step too large for the local frequency).
SquareMatrix delta_matrix(double h, const SquareMatrix& vxx);

/// Settings for the truncated-series evaluation in lambda_half_product.
struct SeriesSettings {
    /// Stop when the next term's max-norm falls below this times the
    /// accumulated sum's max-norm.
    double term_tolerance = 1e-16;
    /// Hard cap on the number of series terms.
    int max_terms = 40;
    /// Largest admissible spectral-radius estimate of (h/2)^2 (F')^2.
    /// The series radius is (pi/2)^2 ~ 2.467; 1.5 leaves margin.
    double spectral_radius_limit = 1.5;
};

/// The general-form modifier as a product with the inverse symplectic
/// matrix:
///
///   Lambda S^{-1} = h * phi(-(h/2)^2 (F')^2),
///
/// computed by the truncated even power series in M = (h/2)^2 (F')^2 so
/// that no nonsymmetric eigensolver is needed.  The spectral radius of M
/// is estimated by power iteration first; SeriesDivergence is thrown when
/// it exceeds the safe radius or the term bound is not met within the cap.
/// The full modifier is Lambda = (result) * S.
SquareMatrix lambda_half_product(double h, const SquareMatrix& fprime,
                                 const SeriesSettings& settings = {});

}  // namespace avf
