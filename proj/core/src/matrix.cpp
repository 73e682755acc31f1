#include "fln/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "fln/errors.hpp"

namespace fln {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rws) {
    Matrix m;
    m.rows = rws.size();
    m.cols = rws.size() ? rws.begin()->size() : 0;
    m.data.reserve(m.rows * m.cols);
    for (const auto& row : rws) {
        if (row.size() != m.cols)
            throw ShapeError("from_rows: ragged rows (" + std::to_string(row.size()) +
                             " vs " + std::to_string(m.cols) + " columns)");
        m.data.insert(m.data.end(), row.begin(), row.end());
    }
    return m;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(op) + ": shapes differ: " + a.shape_str() +
                         " vs " + b.shape_str());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw ShapeError("matmul: inner dimensions differ: " + a.shape_str() +
                         " * " + b.shape_str());
    Matrix out(a.rows, b.cols);
    // i-k-j order: each out(i,j) accumulates over k ascending, and the inner
    // loop runs over contiguous memory in both b and out.
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols)
        throw ShapeError("matmul_nt: inner dimensions differ: " + a.shape_str() +
                         " * transpose(" + b.shape_str() + ")");
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows)
        throw ShapeError("matmul_tn: inner dimensions differ: transpose(" +
                         a.shape_str() + ") * " + b.shape_str());
    Matrix out(a.cols, b.cols);
    // k is the contraction index (rows of both inputs); keeping it outermost
    // preserves ascending-k accumulation for every output entry.
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            double* orow = &out.data[i * out.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
    return out;
}

Matrix relu(const Matrix& x) {
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) out.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
    return out;
}

Matrix relu_grad(const Matrix& x) {
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) out.data[i] = x.data[i] > 0.0 ? 1.0 : 0.0;
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * b.data[i];
    return out;
}

void add_inplace(Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += b.data[i];
}

void scale_inplace(Matrix& a, double c) {
    for (double& v : a.data) v *= c;
}

void add_row_inplace(Matrix& m, const Matrix& v) {
    if (v.rows != 1 || v.cols != m.cols)
        throw ShapeError("add_row: row vector shape " + v.shape_str() +
                         " does not broadcast over " + m.shape_str());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) += v.data[j];
}

Matrix col_sums(const Matrix& m) {
    Matrix out(1, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out.data[j] += m(i, j);
    return out;
}

void scale_cols_inplace(Matrix& m, const std::vector<double>& v) {
    if (v.size() != m.cols)
        throw ShapeError("scale_cols: vector of length " + std::to_string(v.size()) +
                         " does not match " + m.shape_str());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) *= v[j];
}

Matrix gather_cols(const Matrix& m, const std::vector<std::size_t>& idx) {
    Matrix out(m.rows, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] >= m.cols)
            throw RangeError("gather_cols: index " + std::to_string(idx[j]) +
                             " out of range for " + m.shape_str());
        for (std::size_t i = 0; i < m.rows; ++i) out(i, j) = m(i, idx[j]);
    }
    return out;
}

void scatter_add_cols(Matrix& dst, const Matrix& src, const std::vector<std::size_t>& idx) {
    if (src.cols != idx.size() || src.rows != dst.rows)
        throw ShapeError("scatter_add_cols: source " + src.shape_str() + " with " +
                         std::to_string(idx.size()) + " indices into " + dst.shape_str());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] >= dst.cols)
            throw RangeError("scatter_add_cols: index " + std::to_string(idx[j]) +
                             " out of range for " + dst.shape_str());
        for (std::size_t i = 0; i < src.rows; ++i) dst(i, idx[j]) += src(i, j);
    }
}

void place_cols(Matrix& dst, const Matrix& src, std::size_t col0) {
    if (src.rows != dst.rows || col0 + src.cols > dst.cols)
        throw ShapeError("place_cols: " + src.shape_str() + " at column " +
                         std::to_string(col0) + " does not fit in " + dst.shape_str());
    for (std::size_t i = 0; i < src.rows; ++i)
        for (std::size_t j = 0; j < src.cols; ++j) dst(i, col0 + j) = src(i, j);
}

Matrix slice_cols(const Matrix& m, std::size_t col0, std::size_t n) {
    if (col0 + n > m.cols)
        throw ShapeError("slice_cols: columns [" + std::to_string(col0) + ", " +
                         std::to_string(col0 + n) + ") out of range for " + m.shape_str());
    Matrix out(m.rows, n);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, col0 + j);
    return out;
}

bool all_finite(const Matrix& m) {
    return std::all_of(m.data.begin(), m.data.end(),
                       [](double v) { return std::isfinite(v); });
}

} // namespace fln
