#pragma once

#include <string>
#include <vector>

#include "fln/matrix.hpp"

namespace fln {

enum class MetricKind { accuracy, rmse, auc };

const char* to_string(MetricKind kind);
MetricKind metric_from_string(const std::string& s); // throws ArgumentError

/// Evaluates a metric over model outputs (post-link, one row per sample):
///   - accuracy: arg-max match rate (N×C, C >= 2), or thresholding the
///     single column at 0.5 for N×1 probability outputs;
///   - rmse: root mean squared error over an N×1 output column, in the
///     (possibly standardized) units of the targets;
///   - auc: Mann-Whitney rank statistic with tied scores counted 1/2.
///     The positive-class score is the only column (N×1) or column 1
///     (N×2). Throws MetricError when targets hold a single class.
double metric(MetricKind kind, const Matrix& outputs, const std::vector<double>& targets);

} // namespace fln
