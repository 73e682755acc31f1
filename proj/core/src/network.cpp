#include "fln/network.hpp"

#include <cmath>
#include <string>

#include "fln/errors.hpp"

namespace fln {

const char* to_string(TaskKind task) {
    switch (task) {
        case TaskKind::regression: return "regression";
        case TaskKind::binary: return "binary";
        case TaskKind::multiclass: return "multiclass";
    }
    return "?";
}

const char* to_string(LinkKind link) {
    switch (link) {
        case LinkKind::identity: return "identity";
        case LinkKind::sigmoid: return "sigmoid";
        case LinkKind::softmax: return "softmax";
    }
    return "?";
}

TaskKind task_from_string(const std::string& s) {
    if (s == "regression") return TaskKind::regression;
    if (s == "binary") return TaskKind::binary;
    if (s == "multiclass") return TaskKind::multiclass;
    throw ArgumentError("unknown task kind: \"" + s + "\"");
}

LinkKind link_from_string(const std::string& s) {
    if (s == "identity") return LinkKind::identity;
    if (s == "sigmoid") return LinkKind::sigmoid;
    if (s == "softmax") return LinkKind::softmax;
    throw ArgumentError("unknown link kind: \"" + s + "\"");
}

namespace {

std::string level_str(std::size_t k) { return "layer " + std::to_string(k + 1); }

/// Sorted complement of a strictly increasing index list in [0, n).
std::vector<std::size_t> complement(const std::vector<std::size_t>& idx, std::size_t n) {
    std::vector<std::size_t> out;
    out.reserve(n - idx.size());
    std::size_t p = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (p < idx.size() && idx[p] == j) {
            ++p;
        } else {
            out.push_back(j);
        }
    }
    return out;
}

Matrix apply_link(const Matrix& logits, LinkKind link) {
    switch (link) {
        case LinkKind::identity: return logits;
        case LinkKind::sigmoid: return sigmoid(logits);
        case LinkKind::softmax: return softmax_rows(logits);
    }
    throw ArgumentError("apply_link: unknown link kind");
}

enum class GateMode { sampled, noise_free };

ForwardCache forward_impl(const FeatureLevelNet& net, const Matrix& batch,
                          GateMode mode, Rng* rng,
                          const std::vector<std::vector<double>>* noise) {
    if (batch.cols != net.input_dim)
        throw ShapeError("forward: batch is " + batch.shape_str() + " but the network expects " +
                         std::to_string(net.input_dim) + " input features");
    const std::size_t depth = net.depth();
    const auto& offsets = net.head.group_offsets;

    ForwardCache cache;
    cache.x = batch;
    cache.hidden.reserve(depth + 1);
    cache.hidden.push_back(batch);
    cache.glm_input = Matrix(batch.rows, net.glm_width());

    for (std::size_t k = 0; k < depth; ++k) {
        const Matrix& h_prev = cache.hidden.back();
        const HiddenLayer& layer = net.layers[k];
        const HardConcreteGate& gate = net.gates[k];

        GateSample gs;
        switch (mode) {
            case GateMode::sampled:
                gs = noise ? sample_from_noise(gate, (*noise)[k]) : sample(gate, *rng);
                break;
            case GateMode::noise_free:
                gs.z = deterministic(gate);
                break;
        }

        const std::size_t group_width = offsets[k + 1] - offsets[k];
        Matrix gathered;
        if (layer.input_index.empty()) {
            // Dense mode: the gate decides routing. B(z) masks the
            // passthrough copy, z scales the hidden-path copy; the two are
            // disjoint per feature because B(z) * z == 0 identically.
            if (gate.size() != h_prev.cols)
                throw ShapeError("forward: gate " + std::to_string(k + 1) + " has " +
                                 std::to_string(gate.size()) + " entries for " +
                                 std::to_string(h_prev.cols) + " features");
            if (group_width != h_prev.cols)
                throw ShapeError("forward: head group " + std::to_string(k + 1) + " width " +
                                 std::to_string(group_width) + " != feature count " +
                                 std::to_string(h_prev.cols));
            const std::vector<double> bz = binary_complement(gs.z);
            Matrix pass = h_prev;
            scale_cols_inplace(pass, bz);
            place_cols(cache.glm_input, pass, offsets[k]);
            cache.bz.push_back(bz);
            gathered = h_prev;
        } else {
            // Compact (pruned) mode: routing is structural. The columns in
            // input_index feed the layer; the complement is the head group.
            const auto routed = complement(layer.input_index, h_prev.cols);
            if (group_width != routed.size())
                throw ShapeError("forward: head group " + std::to_string(k + 1) + " width " +
                                 std::to_string(group_width) + " != routed count " +
                                 std::to_string(routed.size()));
            place_cols(cache.glm_input, gather_cols(h_prev, routed), offsets[k]);
            cache.bz.emplace_back();
            gathered = gather_cols(h_prev, layer.input_index);
        }

        Matrix gated = gathered;
        scale_cols_inplace(gated, gs.z);
        Matrix pre = matmul_nt(gated, layer.weights);
        add_row_inplace(pre, layer.bias);
        cache.hidden.push_back(relu(pre));
        cache.samples.push_back(std::move(gs));
        cache.gathered.push_back(std::move(gathered));
        cache.gated.push_back(std::move(gated));
        cache.pre.push_back(std::move(pre));
    }

    place_cols(cache.glm_input, cache.hidden.back(), offsets[depth]);
    cache.logits = matmul_nt(cache.glm_input, net.head.weights);
    add_row_inplace(cache.logits, net.head.bias);
    return cache;
}

} // namespace

FeatureLevelNet make_net(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                         std::size_t out_dim, TaskKind task, LinkKind link, Rng& rng,
                         double init_log_alpha, double init_log_alpha_jitter,
                         GateConstants gate_constants) {
    if (input_dim == 0 || out_dim == 0)
        throw ArgumentError("make_net: input and output dimensions must be nonzero");
    for (std::size_t w : hidden)
        if (w == 0) throw ArgumentError("make_net: hidden widths must be nonzero");

    FeatureLevelNet net;
    net.input_dim = input_dim;
    net.task = task;
    net.head.link = link;

    std::size_t in = input_dim;
    for (std::size_t w : hidden) {
        HiddenLayer layer;
        layer.weights = Matrix(w, in);
        const double scale = std::sqrt(2.0 / static_cast<double>(in));
        for (double& v : layer.weights.data) v = scale * rng.normal();
        layer.bias = Matrix(1, w);
        net.layers.push_back(std::move(layer));
        in = w;
    }
    in = input_dim;
    for (std::size_t w : hidden) {
        HardConcreteGate gate(in, init_log_alpha, gate_constants);
        if (init_log_alpha_jitter != 0.0)
            for (double& la : gate.log_alpha) la = init_log_alpha + init_log_alpha_jitter * rng.normal();
        net.gates.push_back(std::move(gate));
        in = w;
    }

    net.head.group_offsets.push_back(0);
    std::size_t d = input_dim;
    for (std::size_t w : hidden) {
        net.head.group_offsets.push_back(net.head.group_offsets.back() + d);
        d = w;
    }
    net.head.group_offsets.push_back(net.head.group_offsets.back() + d);
    net.head.weights = Matrix(out_dim, net.head.group_offsets.back());
    net.head.bias = Matrix(1, out_dim);
    return net;
}

void validate_net(const FeatureLevelNet& net) {
    const std::size_t depth = net.depth();
    if (net.gates.size() != depth)
        throw ValidationError("network has " + std::to_string(depth) + " layers but " +
                              std::to_string(net.gates.size()) + " gates");
    if (net.head.group_offsets.size() != depth + 2)
        throw ValidationError("head group_offsets must list " + std::to_string(depth + 2) +
                              " boundaries, found " +
                              std::to_string(net.head.group_offsets.size()));
    if (net.head.group_offsets.front() != 0)
        throw ValidationError("head group_offsets must start at 0");
    if (net.input_dim == 0) throw ValidationError("input dimension must be nonzero");

    std::size_t width = net.input_dim;
    for (std::size_t k = 0; k < depth; ++k) {
        const HiddenLayer& layer = net.layers[k];
        const auto& idx = layer.input_index;
        std::size_t consumed = width;
        if (!idx.empty() || net.compact) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (idx[j] >= width)
                    throw ValidationError(level_str(k) + ": input index " +
                                          std::to_string(idx[j]) + " out of range for width " +
                                          std::to_string(width));
                if (j > 0 && idx[j] <= idx[j - 1])
                    throw ValidationError(level_str(k) + ": input indices must be strictly increasing");
            }
            consumed = idx.size();
        }
        if (layer.weights.cols != consumed)
            throw ValidationError(level_str(k) + " weights are " + layer.weights.shape_str() +
                                  " but the layer consumes " + std::to_string(consumed) +
                                  " features");
        if (net.gates[k].size() != consumed)
            throw ValidationError("gate " + std::to_string(k + 1) + " has " +
                                  std::to_string(net.gates[k].size()) + " entries but " +
                                  level_str(k) + " consumes " + std::to_string(consumed) +
                                  " features");
        if (layer.bias.rows != 1 || layer.bias.cols != layer.weights.rows)
            throw ValidationError(level_str(k) + " bias is " + layer.bias.shape_str() +
                                  ", expected 1x" + std::to_string(layer.weights.rows));
        const std::size_t group = net.head.group_offsets[k + 1] - net.head.group_offsets[k];
        const std::size_t routed = width - consumed;
        const std::size_t expect = idx.empty() && !net.compact ? width : routed;
        if (group != expect)
            throw ValidationError("head group " + std::to_string(k + 1) + " spans " +
                                  std::to_string(group) + " columns, expected " +
                                  std::to_string(expect));
        const auto& gc = net.gates[k].c;
        if (!(gc.beta > 0.0) || !(gc.gamma < 0.0) || !(gc.zeta > 1.0))
            throw ValidationError("gate " + std::to_string(k + 1) +
                                  " constants violate beta>0, gamma<0, zeta>1");
        for (double la : net.gates[k].log_alpha)
            if (!std::isfinite(la))
                throw ValidationError("gate " + std::to_string(k + 1) + " has non-finite log_alpha");
        if (!all_finite(layer.weights) || !all_finite(layer.bias))
            throw ValidationError(level_str(k) + " has non-finite parameters");
        width = layer.weights.rows;
    }
    const std::size_t final_group =
        net.head.group_offsets[depth + 1] - net.head.group_offsets[depth];
    if (final_group != width)
        throw ValidationError("final head group spans " + std::to_string(final_group) +
                              " columns, expected " + std::to_string(width));
    if (net.head.weights.cols != net.head.group_offsets.back())
        throw ValidationError("head weights are " + net.head.weights.shape_str() +
                              " but group offsets end at " +
                              std::to_string(net.head.group_offsets.back()));
    if (net.head.bias.rows != 1 || net.head.bias.cols != net.head.weights.rows)
        throw ValidationError("head bias is " + net.head.bias.shape_str() + ", expected 1x" +
                              std::to_string(net.head.weights.rows));
    if (!all_finite(net.head.weights) || !all_finite(net.head.bias))
        throw ValidationError("head has non-finite parameters");
}

LossKind loss_kind_for(const FeatureLevelNet& net) {
    switch (net.head.link) {
        case LinkKind::identity: return LossKind::mse;
        case LinkKind::sigmoid: return LossKind::binary_cross_entropy;
        case LinkKind::softmax: return LossKind::softmax_cross_entropy;
    }
    throw ArgumentError("loss_kind_for: unknown link kind");
}

std::pair<Matrix, ForwardCache> forward_train(const FeatureLevelNet& net,
                                              const Matrix& batch, Rng& rng) {
    ForwardCache cache = forward_impl(net, batch, GateMode::sampled, &rng, nullptr);
    Matrix out = apply_link(cache.logits, net.head.link);
    return {std::move(out), std::move(cache)};
}

std::pair<Matrix, ForwardCache> forward_train_with_noise(
    const FeatureLevelNet& net, const Matrix& batch,
    const std::vector<std::vector<double>>& noise) {
    if (noise.size() != net.depth())
        throw ShapeError("forward_train_with_noise: " + std::to_string(noise.size()) +
                         " noise vectors for " + std::to_string(net.depth()) + " gates");
    ForwardCache cache = forward_impl(net, batch, GateMode::sampled, nullptr, &noise);
    Matrix out = apply_link(cache.logits, net.head.link);
    return {std::move(out), std::move(cache)};
}

Matrix forward_eval(const FeatureLevelNet& net, const Matrix& batch) {
    ForwardCache cache = forward_impl(net, batch, GateMode::noise_free, nullptr, nullptr);
    return apply_link(cache.logits, net.head.link);
}

namespace {

std::pair<double, ForwardCache> objective_impl(const FeatureLevelNet& net,
                                               const Matrix& batch, const Matrix& targets,
                                               double lambda, Rng* rng,
                                               const std::vector<std::vector<double>>* noise) {
    if (lambda < 0.0) throw ArgumentError("objective: lambda must be >= 0");
    ForwardCache cache = forward_impl(net, batch, GateMode::sampled, rng, noise);
    cache.lambda_eff = lambda;
    auto [data_loss, grad] = loss_and_grad(loss_kind_for(net), cache.logits, targets);
    (void)grad;
    double penalty = 0.0;
    if (net.depth() > 0 && lambda > 0.0) {
        for (const auto& gate : net.gates) penalty += expected_l0(gate).total;
        penalty *= lambda / static_cast<double>(net.depth());
    }
    return {data_loss + penalty, std::move(cache)};
}

} // namespace

std::pair<double, ForwardCache> objective(const FeatureLevelNet& net, const Matrix& batch,
                                          const Matrix& targets, double lambda, Rng& rng) {
    return objective_impl(net, batch, targets, lambda, &rng, nullptr);
}

std::pair<double, ForwardCache> objective_with_noise(
    const FeatureLevelNet& net, const Matrix& batch, const Matrix& targets,
    double lambda, const std::vector<std::vector<double>>& noise) {
    if (noise.size() != net.depth())
        throw ShapeError("objective_with_noise: " + std::to_string(noise.size()) +
                         " noise vectors for " + std::to_string(net.depth()) + " gates");
    return objective_impl(net, batch, targets, lambda, nullptr, &noise);
}

Gradients backward(const FeatureLevelNet& net, const ForwardCache& cache,
                   const Matrix& targets) {
    const std::size_t depth = net.depth();
    const auto& offsets = net.head.group_offsets;
    auto [loss, dlogits] = loss_and_grad(loss_kind_for(net), cache.logits, targets);
    (void)loss;

    Gradients g;
    g.layer_weights.resize(depth);
    g.layer_bias.resize(depth);
    g.gate_log_alpha.resize(depth);

    g.head_weights = matmul_tn(dlogits, cache.glm_input);
    g.head_bias = col_sums(dlogits);
    const Matrix d_glm = matmul(dlogits, net.head.weights); // N × D

    // Gradient w.r.t. the final hidden output (last head group).
    Matrix dh = slice_cols(d_glm, offsets[depth], offsets[depth + 1] - offsets[depth]);

    for (std::size_t k = depth; k-- > 0;) {
        const HiddenLayer& layer = net.layers[k];
        const Matrix& h_prev = cache.hidden[k];

        Matrix dpre = hadamard(dh, relu_grad(cache.pre[k]));
        g.layer_weights[k] = matmul_tn(dpre, cache.gated[k]);
        g.layer_bias[k] = col_sums(dpre);
        Matrix dgated = matmul(dpre, layer.weights); // N × J_k

        // Hidden-path gradient for the gate values: dz[j] = sum_i
        // dgated(i,j) * gathered(i,j). The passthrough path contributes
        // nothing because the binary complement is piecewise constant.
        const Matrix& gathered = cache.gathered[k];
        std::vector<double> dz(gathered.cols, 0.0);
        for (std::size_t i = 0; i < gathered.rows; ++i)
            for (std::size_t j = 0; j < gathered.cols; ++j)
                dz[j] += dgated(i, j) * gathered(i, j);

        // Gradient flowing into h_{k-1} through the scaled hidden path...
        scale_cols_inplace(dgated, cache.samples[k].z);
        Matrix dh_prev(h_prev.rows, h_prev.cols);
        const std::size_t group_width = offsets[k + 1] - offsets[k];
        Matrix dpass = slice_cols(d_glm, offsets[k], group_width);
        if (layer.input_index.empty()) {
            // ...plus the passthrough path where B(z) = 1.
            add_inplace(dh_prev, dgated);
            scale_cols_inplace(dpass, cache.bz[k]);
            add_inplace(dh_prev, dpass);
        } else {
            scatter_add_cols(dh_prev, dgated, layer.input_index);
            scatter_add_cols(dh_prev, dpass, complement(layer.input_index, h_prev.cols));
        }

        g.gate_log_alpha[k] = sample_backward(cache.samples[k], net.gates[k], dz);
        if (cache.lambda_eff > 0.0) {
            const double w = cache.lambda_eff / static_cast<double>(depth);
            const ExpectedL0 pen = expected_l0(net.gates[k]);
            for (std::size_t j = 0; j < pen.grad.size(); ++j)
                g.gate_log_alpha[k][j] += w * pen.grad[j];
        }
        dh = std::move(dh_prev);
    }
    return g;
}

} // namespace fln
