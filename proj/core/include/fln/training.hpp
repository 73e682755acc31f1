#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fln/data.hpp"
#include "fln/metrics.hpp"
#include "fln/network.hpp"

namespace fln {

/// "proposed" trains the gated feature-leveling network. "baseline" trains
/// a plain fully connected network on the same stack: gates are pinned
/// fully open (saturated, so sampling returns exactly 1), the penalty
/// weight is forced to 0, and the head's passthrough columns — whose input
/// is then identically zero — stay at their zero initialization.
enum class TrainMode { proposed, baseline };

struct TrainConfig {
    double lambda = 0.1;        // open-gate penalty weight (>= 0)
    double lr = 1e-3;           // Adam learning rate
    std::size_t batch_size = 128;
    std::size_t iterations = 10000;
    std::uint64_t seed = 1;
    /// Iterations over which lambda ramps linearly from 0 to its full
    /// value; the sentinel SIZE_MAX means iterations / 10.
    std::size_t lambda_warmup_iters = static_cast<std::size_t>(-1);
    std::size_t eval_every = 500;
    TrainMode mode = TrainMode::proposed;
    GateConstants gate_constants{};
};

struct EvalRecord {
    std::size_t iteration = 0;
    double train_loss = 0.0;  // batch data loss (penalty excluded)
    double eval_metric = 0.0; // NaN when no eval set was supplied
    std::vector<std::size_t> open_gates; // per level: count of zhat > 0
};

struct TrainHistory {
    MetricKind metric_kind = MetricKind::accuracy;
    std::vector<EvalRecord> records;
};

/// rmse for regression, accuracy for the classification tasks.
MetricKind default_metric(TaskKind task);

/// Trains a feature-leveling network (or its baseline) on train_set.
///
/// The network is He-initialized with gates starting open (log_alpha
/// 2.3 ± 0.01 jitter); minibatches come from a seeded reshuffled stream;
/// every parameter is updated by its own Adam state in a fixed order, so
/// the result is a pure function of (config, datasets, hidden, task).
/// Throws TrainingError naming the iteration if the loss turns non-finite.
std::pair<FeatureLevelNet, TrainHistory> train(const TrainConfig& config,
                                               const Dataset& train_set,
                                               const Dataset* eval_set,
                                               const std::vector<std::size_t>& hidden,
                                               TaskKind task);

/// The target matrix the library's losses expect: one column of labels
/// (class indices for cross-entropy heads, raw values for regression).
Matrix targets_for(const Dataset& ds, const std::vector<std::size_t>& rows);

} // namespace fln
