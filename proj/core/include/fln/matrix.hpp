#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace fln {

/// Dense row-major matrix of doubles: the sole tensor type in the library.
///
/// All numeric kernels that consume matrices fix their summation order
/// (row-major, left-to-right over the contraction index), so every
/// operation is bit-reproducible across runs on the same build.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // rows * cols values, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    /// Build from nested braces: Matrix::from_rows({{1,2},{3,4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rws);

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    /// "3x4" — used by error messages.
    std::string shape_str() const;
};

/// Throws ShapeError naming both shapes unless a and b match exactly.
void require_same_shape(const Matrix& a, const Matrix& b, const char* op);

/// a (m×k) times b (k×n). Fixed accumulation order over k (ascending).
Matrix matmul(const Matrix& a, const Matrix& b);

/// a (m×k) times transpose(b) where b is n×k. Same fixed order over k.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// transpose(a) times b where a is k×m and b is k×n. Fixed order over k.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// Elementwise max(0, x).
Matrix relu(const Matrix& x);

/// 1 where x > 0 else 0 (subgradient 0 at exactly 0).
Matrix relu_grad(const Matrix& x);

/// Elementwise product; shapes must match.
Matrix hadamard(const Matrix& a, const Matrix& b);

/// a += b (elementwise); shapes must match.
void add_inplace(Matrix& a, const Matrix& b);

/// Multiply every entry by c.
void scale_inplace(Matrix& a, double c);

/// Adds row vector v (1×cols) to every row of m in place.
void add_row_inplace(Matrix& m, const Matrix& v);

/// Column sums as a 1×cols matrix (rows accumulated top to bottom).
Matrix col_sums(const Matrix& m);

/// Scales column j of m by v[j] in place (v.size() == m.cols).
void scale_cols_inplace(Matrix& m, const std::vector<double>& v);

/// New matrix holding the given columns of m, in the given order.
Matrix gather_cols(const Matrix& m, const std::vector<std::size_t>& idx);

/// dst(:, idx[j]) += src(:, j) for every j.
void scatter_add_cols(Matrix& dst, const Matrix& src, const std::vector<std::size_t>& idx);

/// Copies src into dst starting at column col0 (dst must be wide enough).
void place_cols(Matrix& dst, const Matrix& src, std::size_t col0);

/// Columns [col0, col0+n) of m as a new matrix.
Matrix slice_cols(const Matrix& m, std::size_t col0, std::size_t n);

/// True if every entry is finite.
bool all_finite(const Matrix& m);

} // namespace fln
