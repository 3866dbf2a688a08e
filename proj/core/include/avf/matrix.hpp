#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "avf/errors.hpp"

namespace avf {

/// Small dense square matrix, row-major.  Sized for the few-by-few Hessians
/// and phase-space Jacobians this library works with; no attempt is made to
/// be a general linear-algebra type.
class SquareMatrix {
public:
    SquareMatrix() = default;

    /// Zero matrix of the given dimension (dim >= 1).
    explicit SquareMatrix(int dim);

    /// From row-major entries; entries.size() must equal dim*dim.
    SquareMatrix(int dim, std::vector<double> entries);

    /// Convenience for tests and small literals: rows as nested lists.
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SquareMatrix identity(int dim);
    static SquareMatrix diagonal(std::span<const double> diag);

    /// Tags the matrix as symmetric, checking max|A_ij - A_ji| against
    /// 1e-12 * max|A_ij|.  Throws NonSymmetric on failure.
    SquareMatrix& assert_symmetric();

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] bool symmetric_flag() const { return symmetric_; }

    double& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
    double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }

    [[nodiscard]] std::span<const double> data() const { return entries_; }

    [[nodiscard]] SquareMatrix transposed() const;
    [[nodiscard]] SquareMatrix operator*(const SquareMatrix& rhs) const;
    [[nodiscard]] std::vector<double> operator*(std::span<const double> v) const;
    SquareMatrix& operator+=(const SquareMatrix& rhs);
    SquareMatrix& operator-=(const SquareMatrix& rhs);
    SquareMatrix& operator*=(double s);
    [[nodiscard]] SquareMatrix operator+(const SquareMatrix& rhs) const;
    [[nodiscard]] SquareMatrix operator-(const SquareMatrix& rhs) const;
    [[nodiscard]] SquareMatrix operator*(double s) const;

    /// max_ij |A_ij|
    [[nodiscard]] double max_abs() const;

    /// y^T A x for same-dimension vectors.
    [[nodiscard]] double bilinear(std::span<const double> y, std::span<const double> x) const;

private:
    int dim_ = 0;
    bool symmetric_ = false;
    std::vector<double> entries_;
};

SquareMatrix operator*(double s, const SquareMatrix& m);

/// Eigendecomposition A = Q diag(lambda) Q^T of a symmetric matrix.
/// Eigenvalues ascend; Q's columns are the corresponding eigenvectors.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    SquareMatrix eigenvectors;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// The input must carry the symmetric flag (see assert_symmetric); the sweep
/// stops when all off-diagonal entries fall below 1e-14 * max|A| and throws
/// NoConvergence after 50 sweeps.
EigenDecomposition sym_eigen(const SquareMatrix& a);

}  // namespace avf
