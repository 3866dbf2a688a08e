#include "avf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace avf {

SquareMatrix::SquareMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("SquareMatrix: dim must be >= 1");
    entries_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
}

SquareMatrix::SquareMatrix(int dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim < 1) throw std::invalid_argument("SquareMatrix: dim must be >= 1");
    if (entries_.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("SquareMatrix: entry count must equal dim^2");
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    dim_ = static_cast<int>(rows.size());
    if (dim_ < 1) throw std::invalid_argument("SquareMatrix: dim must be >= 1");
    entries_.reserve(static_cast<std::size_t>(dim_) * dim_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim_)
            throw std::invalid_argument("SquareMatrix: ragged initializer");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

SquareMatrix SquareMatrix::identity(int dim) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> diag) {
    SquareMatrix m(static_cast<int>(diag.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    return m;
}

SquareMatrix& SquareMatrix::assert_symmetric() {
    double scale = max_abs();
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    if (worst > 1e-12 * scale)
        throw NonSymmetric("matrix is not symmetric: max asymmetry " + std::to_string(worst) +
                           " exceeds 1e-12 * " + std::to_string(scale));
    symmetric_ = true;
    return *this;
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
    if (rhs.dim_ != dim_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
    SquareMatrix out(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int k = 0; k < dim_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < dim_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

std::vector<double> SquareMatrix::operator*(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw std::invalid_argument("SquareMatrix: vector dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& rhs) {
    if (rhs.dim_ != dim_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    symmetric_ = false;
    return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& rhs) {
    if (rhs.dim_ != dim_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    symmetric_ = false;
    return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
    for (double& e : entries_) e *= s;
    return *this;
}

SquareMatrix SquareMatrix::operator+(const SquareMatrix& rhs) const {
    SquareMatrix out = *this;
    out += rhs;
    return out;
}

SquareMatrix SquareMatrix::operator-(const SquareMatrix& rhs) const {
    SquareMatrix out = *this;
    out -= rhs;
    return out;
}

SquareMatrix SquareMatrix::operator*(double s) const {
    SquareMatrix out = *this;
    out *= s;
    return out;
}

SquareMatrix operator*(double s, const SquareMatrix& m) { return m * s; }

double SquareMatrix::max_abs() const {
    double m = 0.0;
    for (double e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double SquareMatrix::bilinear(std::span<const double> y, std::span<const double> x) const {
    std::vector<double> ax = (*this) * x;
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += y[static_cast<std::size_t>(i)] * ax[static_cast<std::size_t>(i)];
    return s;
}

EigenDecomposition sym_eigen(const SquareMatrix& input) {
    SquareMatrix a = input;
    if (!a.symmetric_flag()) a.assert_symmetric();
    const int n = a.dim();
    SquareMatrix q = SquareMatrix::identity(n);
    const double tol = 1e-14 * std::max(a.max_abs(), 1e-300);

    auto off_norm = [&]() {
        double worst = 0.0;
        for (int p = 0; p < n; ++p)
            for (int r = p + 1; r < n; ++r) worst = std::max(worst, std::abs(a(p, r)));
        return worst;
    };

    int sweep = 0;
    while (off_norm() > tol) {
        if (++sweep > 50)
            throw NoConvergence("sym_eigen: Jacobi sweeps exceeded 50", 50, off_norm());
        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (std::abs(apr) <= tol * 1e-2) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p);
                const double arr = a(r, r);
                a(p, p) = app - t * apr;
                a(r, r) = arr + t * apr;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != r) {
                        const double akp = a(k, p);
                        const double akr = a(k, r);
                        a(k, p) = a(p, k) = akp - s * (akr + tau * akp);
                        a(k, r) = a(r, k) = akr + s * (akp - tau * akr);
                    }
                    const double qkp = q(k, p);
                    const double qkr = q(k, r);
                    q(k, p) = qkp - s * (qkr + tau * qkp);
                    q(k, r) = qkr + s * (qkp - tau * qkr);
                }
            }
        }
    }

    // Sort eigenvalues ascending, permuting eigenvector columns alongside.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(static_cast<std::size_t>(n));
    dec.eigenvectors = SquareMatrix(n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        dec.eigenvalues[static_cast<std::size_t>(j)] = a(src, src);
        for (int i = 0; i < n; ++i) dec.eigenvectors(i, j) = q(i, src);
    }
    return dec;
}

}  // namespace avf
