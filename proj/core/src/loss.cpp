#include "fln/loss.hpp"

#include <cmath>

#include "fln/errors.hpp"

namespace fln {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.size(); ++i) out.data[i] = sigmoid(logits.data[i]);
    return out;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        double mx = logits(i, 0);
        for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, logits(i, j));
        double denom = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j) {
            out(i, j) = std::exp(logits(i, j) - mx);
            denom += out(i, j);
        }
        for (std::size_t j = 0; j < logits.cols; ++j) out(i, j) /= denom;
    }
    return out;
}

namespace {

void require_finite(const Matrix& output) {
    if (!all_finite(output))
        throw NumericError("loss: non-finite model output");
}

std::pair<double, Matrix> mse(const Matrix& output, const Matrix& target) {
    require_same_shape(output, target, "mse");
    const double n = static_cast<double>(output.size());
    Matrix grad(output.rows, output.cols);
    double acc = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double d = output.data[i] - target.data[i];
        acc += d * d;
        grad.data[i] = 2.0 * d / n;
    }
    return {acc / n, grad};
}

std::pair<double, Matrix> bce(const Matrix& output, const Matrix& target) {
    if (output.cols != 1)
        throw ShapeError("binary_cross_entropy: expected Nx1 logits, got " +
                         output.shape_str());
    require_same_shape(output, target, "binary_cross_entropy");
    const double n = static_cast<double>(output.rows);
    Matrix grad(output.rows, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < output.rows; ++i) {
        const double z = output.data[i];
        const double y = target.data[i];
        if (y != 0.0 && y != 1.0)
            throw RangeError("binary_cross_entropy: target at row " + std::to_string(i) +
                             " is " + std::to_string(y) + ", expected 0 or 1");
        acc += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
        grad.data[i] = (sigmoid(z) - y) / n;
    }
    return {acc / n, grad};
}

std::pair<double, Matrix> softmax_ce(const Matrix& output, const Matrix& target) {
    if (target.cols != 1 || target.rows != output.rows)
        throw ShapeError("softmax_cross_entropy: class-index target must be " +
                         std::to_string(output.rows) + "x1, got " + target.shape_str());
    const double n = static_cast<double>(output.rows);
    Matrix grad(output.rows, output.cols);
    double acc = 0.0;
    for (std::size_t i = 0; i < output.rows; ++i) {
        const double raw = target.data[i];
        if (raw != std::floor(raw) || raw < 0.0 ||
            raw >= static_cast<double>(output.cols))
            throw RangeError("softmax_cross_entropy: class index " + std::to_string(raw) +
                             " at row " + std::to_string(i) + " outside [0, " +
                             std::to_string(output.cols) + ")");
        const std::size_t y = static_cast<std::size_t>(raw);
        double mx = output(i, 0);
        for (std::size_t j = 1; j < output.cols; ++j) mx = std::max(mx, output(i, j));
        double denom = 0.0;
        for (std::size_t j = 0; j < output.cols; ++j) denom += std::exp(output(i, j) - mx);
        acc += mx + std::log(denom) - output(i, y);
        for (std::size_t j = 0; j < output.cols; ++j) {
            const double p = std::exp(output(i, j) - mx) / denom;
            grad(i, j) = (p - (j == y ? 1.0 : 0.0)) / n;
        }
    }
    return {acc / n, grad};
}

} // namespace

std::pair<double, Matrix> loss_and_grad(LossKind kind, const Matrix& output,
                                        const Matrix& target) {
    require_finite(output);
    switch (kind) {
        case LossKind::mse: return mse(output, target);
        case LossKind::binary_cross_entropy: return bce(output, target);
        case LossKind::softmax_cross_entropy: return softmax_ce(output, target);
    }
    throw ArgumentError("loss_and_grad: unknown loss kind");
}

} // namespace fln
