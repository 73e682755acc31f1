#include "fln/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "fln/adam.hpp"
#include "fln/errors.hpp"

namespace fln {

namespace {

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), m.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::memcpy(&out.data[i * m.cols], &m.data[rows[i] * m.cols],
                    m.cols * sizeof(double));
    }
    return out;
}

/// Number of classes implied by the labels of a classification dataset.
std::size_t class_count(const Dataset& ds, TaskKind task) {
    double max_label = -1.0;
    for (double v : ds.labels) {
        if (!std::isfinite(v) || v < 0.0 || std::floor(v) != v) {
            throw ArgumentError("train: classification labels must be non-negative "
                                "integers, got " + std::to_string(v));
        }
        max_label = std::max(max_label, v);
    }
    auto count = static_cast<std::size_t>(max_label) + 1;
    if (task == TaskKind::binary && count > 2) {
        throw ArgumentError("train: binary task has labels beyond {0, 1}");
    }
    return std::max<std::size_t>(count, 2);
}

double effective_lambda(double lambda, std::size_t iteration, std::size_t warmup) {
    if (lambda == 0.0 || warmup == 0) return lambda;
    double ramp = static_cast<double>(iteration + 1) / static_cast<double>(warmup);
    return lambda * std::min(1.0, ramp);
}

/// The penalty part of the objective at the given weight, so the recorded
/// training loss is the data term alone.
double penalty_value(const FeatureLevelNet& net, double lambda_eff) {
    if (lambda_eff == 0.0) return 0.0;
    double total = 0.0;
    for (const auto& gate : net.gates) total += expected_l0(gate).total;
    return lambda_eff / static_cast<double>(net.depth()) * total;
}

std::vector<std::size_t> open_gate_counts(const FeatureLevelNet& net) {
    std::vector<std::size_t> counts;
    counts.reserve(net.gates.size());
    for (const auto& gate : net.gates) {
        std::vector<double> zhat = deterministic(gate);
        counts.push_back(static_cast<std::size_t>(
            std::count_if(zhat.begin(), zhat.end(), [](double z) { return z > 0.0; })));
    }
    return counts;
}

} // namespace

MetricKind default_metric(TaskKind task) {
    return task == TaskKind::regression ? MetricKind::rmse : MetricKind::accuracy;
}

Matrix targets_for(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= ds.labels.size()) {
            throw ArgumentError("targets_for: row " + std::to_string(rows[i]) +
                                " out of range for " + std::to_string(ds.labels.size()) +
                                " labels");
        }
        out(i, 0) = ds.labels[rows[i]];
    }
    return out;
}

std::pair<FeatureLevelNet, TrainHistory> train(const TrainConfig& config,
                                               const Dataset& train_set,
                                               const Dataset* eval_set,
                                               const std::vector<std::size_t>& hidden,
                                               TaskKind task) {
    if (train_set.size() == 0) throw ArgumentError("train: dataset is empty");
    if (hidden.empty()) throw ArgumentError("train: need at least one hidden layer");
    for (std::size_t width : hidden) {
        if (width == 0) throw ArgumentError("train: hidden layer width must be positive");
    }
    if (config.batch_size == 0) throw ArgumentError("train: batch_size must be positive");
    if (config.iterations == 0) throw ArgumentError("train: iterations must be positive");
    if (!(config.lr > 0.0)) throw ArgumentError("train: learning rate must be positive");
    if (!(config.lambda >= 0.0)) throw ArgumentError("train: lambda must be >= 0");
    if (eval_set != nullptr && eval_set->dim() != train_set.dim()) {
        throw ArgumentError("train: eval set has " + std::to_string(eval_set->dim()) +
                            " features, train set has " + std::to_string(train_set.dim()));
    }

    std::size_t out_dim = 1;
    LinkKind link = LinkKind::identity;
    if (task != TaskKind::regression) {
        out_dim = class_count(train_set, task);
        link = LinkKind::softmax;
    }

    const bool baseline = config.mode == TrainMode::baseline;
    const double lambda = baseline ? 0.0 : config.lambda;
    const double init_log_alpha = baseline ? kSaturatedLogAlpha : 2.3;
    const double init_jitter = baseline ? 0.0 : 0.01;
    const std::size_t warmup = config.lambda_warmup_iters == static_cast<std::size_t>(-1)
                                   ? config.iterations / 10
                                   : config.lambda_warmup_iters;

    Rng rng(config.seed);
    FeatureLevelNet net = make_net(train_set.dim(), hidden, out_dim, task, link, rng,
                                   init_log_alpha, init_jitter, config.gate_constants);

    // One Adam state per parameter tensor. Updates run in a fixed order
    // (layer weights+bias by depth, then gates, then head) so training is
    // bit-reproducible for a given config and dataset.
    std::vector<AdamState> w_states, b_states, gate_states;
    for (const auto& layer : net.layers) {
        w_states.push_back(AdamState::for_param(layer.weights, config.lr));
        b_states.push_back(AdamState::for_param(layer.bias, config.lr));
    }
    std::vector<Matrix> gate_params;
    for (const auto& gate : net.gates) {
        Matrix param(1, gate.size());
        std::copy(gate.log_alpha.begin(), gate.log_alpha.end(), param.data.begin());
        gate_states.push_back(AdamState::for_param(param, config.lr));
        gate_params.push_back(std::move(param));
    }
    AdamState head_w_state = AdamState::for_param(net.head.weights, config.lr);
    AdamState head_b_state = AdamState::for_param(net.head.bias, config.lr);

    TrainHistory history;
    history.metric_kind = default_metric(task);

    const std::size_t n = train_set.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t pos = n; // forces a shuffle before the first batch

    std::vector<std::size_t> rows;
    for (std::size_t it = 0; it < config.iterations; ++it) {
        if (pos >= n) {
            rng.shuffle(perm);
            pos = 0;
        }
        std::size_t bn = std::min(config.batch_size, n - pos);
        rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + bn));
        pos += bn;

        Matrix batch = take_rows(train_set.features, rows);
        Matrix targets = targets_for(train_set, rows);

        const double lambda_eff = effective_lambda(lambda, it, warmup);
        std::pair<double, ForwardCache> step;
        try {
            step = objective(net, batch, targets, lambda_eff, rng);
        } catch (const NumericError& e) {
            // Non-finite activations reach the loss before the objective
            // itself can turn NaN; both are the same failure.
            throw TrainingError("training diverged at iteration " + std::to_string(it + 1) +
                                ": " + e.what());
        }
        const double obj = step.first;
        const ForwardCache& cache = step.second;
        if (!std::isfinite(obj)) {
            throw TrainingError("training diverged at iteration " + std::to_string(it + 1) +
                                ": objective is not finite");
        }
        const double data_loss = obj - penalty_value(net, lambda_eff);
        Gradients grads = backward(net, cache, targets);

        for (std::size_t k = 0; k < net.depth(); ++k) {
            adam_step(net.layers[k].weights, grads.layer_weights[k], w_states[k]);
            adam_step(net.layers[k].bias, grads.layer_bias[k], b_states[k]);
        }
        for (std::size_t k = 0; k < net.gates.size(); ++k) {
            Matrix grad(1, net.gates[k].size());
            std::copy(grads.gate_log_alpha[k].begin(), grads.gate_log_alpha[k].end(),
                      grad.data.begin());
            adam_step(gate_params[k], grad, gate_states[k]);
            std::copy(gate_params[k].data.begin(), gate_params[k].data.end(),
                      net.gates[k].log_alpha.begin());
        }
        adam_step(net.head.weights, grads.head_weights, head_w_state);
        adam_step(net.head.bias, grads.head_bias, head_b_state);

        const bool last = it + 1 == config.iterations;
        if (last || (config.eval_every != 0 && (it + 1) % config.eval_every == 0)) {
            EvalRecord rec;
            rec.iteration = it + 1;
            rec.train_loss = data_loss;
            rec.eval_metric = std::numeric_limits<double>::quiet_NaN();
            if (eval_set != nullptr) {
                Matrix outputs = forward_eval(net, eval_set->features);
                rec.eval_metric = metric(history.metric_kind, outputs, eval_set->labels);
            }
            rec.open_gates = open_gate_counts(net);
            history.records.push_back(std::move(rec));
        }
    }
    return {std::move(net), history};
}

} // namespace fln
