#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "evt/errors.hpp"

namespace evt {

// Small dense row-major matrix. Sized for the covariance algebra in this
// library (a handful of rows), not for large linear algebra.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

// Gauss-Jordan inversion with partial pivoting. Pivots below `pivot_tol`
// are treated as rank deficiency.
inline Matrix invert(const Matrix& m, double pivot_tol = 1e-12) {
    if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix must be square");
    const std::size_t n = m.rows();
    Matrix a = m;
    Matrix inv = Matrix::identity(n);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::fabs(a(r, col));
            if (mag > best) {
                best = mag;
                pivot_row = r;
            }
        }
        if (best < pivot_tol)
            throw SingularMatrixError("invert: pivot " + std::to_string(best) +
                                      " below tolerance at column " + std::to_string(col));
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(pivot_row, j));
                std::swap(inv(col, j), inv(pivot_row, j));
            }
        }
        const double pivot = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= pivot;
            inv(col, j) /= pivot;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a(r, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= factor * a(col, j);
                inv(r, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Throws std::invalid_argument when the matrix is not positive definite.
inline Matrix cholesky_lower(const Matrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix must be square");
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = m(i, j);
            for (std::size_t p = 0; p < j; ++p) sum -= l(i, p) * l(j, p);
            if (i == j) {
                if (sum < tol) throw std::invalid_argument("cholesky: matrix is not positive definite");
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    return l;
}

}  // namespace evt
