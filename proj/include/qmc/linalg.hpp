#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qmc {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Desk-scale sizes only; no view types,
/// no expression templates.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::domain_error("Matrix: negative dimension");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Vector column(int j) const {
        Vector c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Vector matvec(const Matrix& m, const Vector& v);
Matrix matmul(const Matrix& a, const Matrix& b);

double max_abs(const Vector& v);
double max_asymmetry(const Matrix& m);
double inf_norm(const Matrix& m);  // max absolute row sum

struct EigenResult {
    Vector values;   // ascending
    Matrix vectors;  // orthonormal columns, one per value
};

/// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues ascending; each eigenvector is scaled so that its
/// entry of largest magnitude (first such entry on ties) is positive.
/// Throws std::domain_error if max |A - A^T| exceeds symmetry_tol.
EigenResult jacobi_eigh(const Matrix& a, double symmetry_tol = 1e-10);

}  // namespace qmc
