#include "fln/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fln/errors.hpp"

namespace fln {

const char* to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::accuracy: return "accuracy";
        case MetricKind::rmse: return "rmse";
        case MetricKind::auc: return "auc";
    }
    return "?";
}

MetricKind metric_from_string(const std::string& s) {
    if (s == "accuracy") return MetricKind::accuracy;
    if (s == "rmse") return MetricKind::rmse;
    if (s == "auc") return MetricKind::auc;
    throw ArgumentError("unknown metric kind: \"" + s + "\"");
}

namespace {

void require_rows(const Matrix& outputs, const std::vector<double>& targets) {
    if (outputs.rows != targets.size())
        throw ShapeError("metric: " + std::to_string(outputs.rows) + " output rows vs " +
                         std::to_string(targets.size()) + " targets");
    if (outputs.rows == 0) throw ArgumentError("metric: empty inputs");
}

double accuracy(const Matrix& outputs, const std::vector<double>& targets) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < outputs.rows; ++i) {
        std::size_t pred = 0;
        if (outputs.cols == 1) {
            pred = outputs(i, 0) >= 0.5 ? 1 : 0;
        } else {
            for (std::size_t j = 1; j < outputs.cols; ++j)
                if (outputs(i, j) > outputs(i, pred)) pred = j;
        }
        if (static_cast<double>(pred) == targets[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(outputs.rows);
}

double rmse(const Matrix& outputs, const std::vector<double>& targets) {
    if (outputs.cols != 1)
        throw ShapeError("rmse: expected Nx1 outputs, got " + outputs.shape_str());
    double acc = 0.0;
    for (std::size_t i = 0; i < outputs.rows; ++i) {
        const double d = outputs(i, 0) - targets[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(outputs.rows));
}

double auc(const Matrix& outputs, const std::vector<double>& targets) {
    std::size_t score_col;
    if (outputs.cols == 1) score_col = 0;
    else if (outputs.cols == 2) score_col = 1;
    else
        throw MetricError("auc: needs a positive-class score (Nx1 or Nx2 outputs), got " +
                          outputs.shape_str());

    const std::size_t n = outputs.rows;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return outputs(a, score_col) < outputs(b, score_col);
    });

    // Mann-Whitney via rank sums; runs of tied scores share their average
    // rank, which realizes the "ties count 1/2" convention exactly.
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && outputs(order[j], score_col) == outputs(order[i], score_col)) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (targets[order[k]] == 1.0) {
                rank_sum_pos += avg_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw MetricError("auc undefined: targets contain a single class");
    const double np = static_cast<double>(n_pos);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) /
           (np * static_cast<double>(n_neg));
}

} // namespace

double metric(MetricKind kind, const Matrix& outputs, const std::vector<double>& targets) {
    require_rows(outputs, targets);
    switch (kind) {
        case MetricKind::accuracy: return accuracy(outputs, targets);
        case MetricKind::rmse: return rmse(outputs, targets);
        case MetricKind::auc: return auc(outputs, targets);
    }
    throw ArgumentError("metric: unknown kind");
}

} // namespace fln
