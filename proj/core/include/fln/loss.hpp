#pragma once

#include <utility>

#include "fln/matrix.hpp"

namespace fln {

enum class LossKind { mse, binary_cross_entropy, softmax_cross_entropy };

/// Mean loss over the batch and its gradient w.r.t. the PRE-link output.
///
/// The cross-entropy kinds fuse their link function (sigmoid / softmax)
/// for numerical stability, so `output` is always raw logits:
///   - mse: target has the same shape as output; loss is the mean squared
///     error over all entries, gradient 2*(output-target)/n_entries.
///   - binary_cross_entropy: output and target are N×1; targets in {0,1};
///     loss uses the stable form max(z,0) - z*y + log1p(exp(-|z|)).
///   - softmax_cross_entropy: output is N×C logits, target is N×1 class
///     indices in [0, C); per-row log-sum-exp, gradient (softmax - onehot)/N.
///
/// Throws NumericError on non-finite output, RangeError on a bad label.
std::pair<double, Matrix> loss_and_grad(LossKind kind, const Matrix& output,
                                        const Matrix& target);

/// Applies a link to logits: row-wise softmax (stable) of an N×C matrix.
Matrix softmax_rows(const Matrix& logits);

/// Elementwise stable logistic sigmoid.
Matrix sigmoid(const Matrix& logits);

/// Scalar stable logistic sigmoid.
double sigmoid(double x);

} // namespace fln
