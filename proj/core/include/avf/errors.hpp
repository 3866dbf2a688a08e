#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace avf {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix handed to a symmetric-only routine failed the symmetry check.
class NonSymmetric : public Error {
public:
    using Error::Error;
};

/// An iteration (eigensolver or implicit-step solver) hit its bound.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, int iterations, double last_residual)
        : Error(what), iterations(iterations), last_residual(last_residual) {}

    int iterations = 0;
    double last_residual = 0.0;
};

/// An eigenvalue of the tanc argument sits too close to the tan pole at (pi/2)^2.
class PoleProximity : public Error {
public:
    using Error::Error;
};

/// The matrix power series for the step modifier cannot converge (spectral
/// bound outside the safe radius) or failed to meet its term bound.
class SeriesDivergence : public Error {
public:
    using Error::Error;
};

/// Potential evaluated at a singular point (Kepler at the origin).
class SingularPoint : public Error {
public:
    using Error::Error;
};

/// The closed-form Kepler discrete gradient has a genuine pole when the two
/// points are (nearly) antipodal through the origin.
class AntipodalSingularity : public Error {
public:
    using Error::Error;
};

/// A quadrature-backed discrete gradient could not certify the requested
/// accuracy via the discrete-gradient identity.
class QuadratureTolerance : public Error {
public:
    using Error::Error;
};

/// Derivatives of the requested order are not available for this potential.
class DerivativeUnavailable : public Error {
public:
    using Error::Error;
};

/// No circular orbit exists at the requested radius (centripetal condition
/// R V'(R) > 0 fails).
class NoCircularOrbit : public Error {
public:
    using Error::Error;
};

/// Trajectory endpoint time does not match the requested measurement time.
class TimeMismatch : public Error {
public:
    using Error::Error;
};

/// Order fit rejected: fewer than three points, non-positive errors, or the
/// step sizes span less than a factor of two.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// Cost normalization against a baseline with zero weighted cost.
class ZeroCost : public Error {
public:
    using Error::Error;
};

/// A step of a trajectory failed; wraps the underlying error with the index.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, std::size_t step_index)
        : Error(what), step_index(step_index) {}

    std::size_t step_index = 0;
};

/// Config document is syntactically malformed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what), line(line), column(column) {}

    int line = 0;
    int column = 0;
};

/// Config document is well-formed but semantically invalid; names the key.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, std::string key = {})
        : Error(what), key(std::move(key)) {}

    std::string key;
};

/// File could not be written or read; carries the path.
class IoError : public Error {
public:
    explicit IoError(const std::string& what, std::string path = {})
        : Error(what), path(std::move(path)) {}

    std::string path;
};

}  // namespace avf
