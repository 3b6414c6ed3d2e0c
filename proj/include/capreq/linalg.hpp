#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "capreq/errors.hpp"

namespace capreq {

/// Dense row-major matrix, sized for desk-scale problems (tens of rows).
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

namespace linalg {

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
inline Matrix cholesky(const Matrix& g)
{
    const std::size_t n = g.rows;
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0)
                    throw Error(Errc::NumericalBreakdown, "Cholesky pivot not positive");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

/// Solves L L^T x = b given the lower factor L.
inline std::vector<double> cholesky_solve(const Matrix& l, std::vector<double> b)
{
    const std::size_t n = l.rows;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
        b[i] /= l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
        b[i] /= l(i, i);
    }
    return b;
}

/// Solves a square system by partial-pivot Gaussian elimination.
/// Returns false if the matrix is singular at the given pivot tolerance.
inline bool lu_solve(Matrix a, std::vector<double> b, std::vector<double>& x,
                     double pivot_tol = 1e-12)
{
    const std::size_t n = a.rows;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            double v = std::fabs(a(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best <= pivot_tol) return false;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return true;
}

/// Row-echelon rank with relative pivot tolerance. Optionally records the
/// pivot column of each eliminated row.
inline std::size_t rank(Matrix a, double rel_tol = 1e-10,
                        std::vector<std::size_t>* pivot_cols = nullptr)
{
    const std::size_t m = a.rows, n = a.cols;
    double scale = 0.0;
    for (double v : a.a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return 0;
    const double tol = rel_tol * scale;
    std::size_t rk = 0;
    for (std::size_t col = 0; col < n && rk < m; ++col) {
        std::size_t piv = rk;
        double best = std::fabs(a(rk, col));
        for (std::size_t r = rk + 1; r < m; ++r) {
            double v = std::fabs(a(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best <= tol) continue;
        if (piv != rk)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(rk, j));
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rk) continue;
            double f = a(r, col) / a(rk, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) a(r, j) -= f * a(rk, j);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rk;
    }
    return rk;
}

} // namespace linalg
} // namespace capreq
