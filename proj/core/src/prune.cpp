#include "fln/prune.hpp"

#include <cmath>

#include "fln/errors.hpp"

namespace fln {

namespace {

struct RoutingPlan {
    std::vector<std::vector<double>> zhat;           // per layer, all layers
    std::vector<std::vector<std::size_t>> surviving; // per KEPT layer: columns with zhat > 0
    std::size_t kept_layers = 0;                     // layers before the first starved one
};

RoutingPlan plan_routing(const FeatureLevelNet& net) {
    RoutingPlan plan;
    plan.kept_layers = net.depth();
    bool starved = false;
    for (std::size_t k = 0; k < net.depth(); ++k) {
        plan.zhat.push_back(deterministic(net.gates[k]));
        if (starved) continue;
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < plan.zhat[k].size(); ++j)
            if (plan.zhat[k][j] > 0.0) s.push_back(j);
        if (s.empty()) {
            plan.kept_layers = k;
            starved = true;
        } else {
            plan.surviving.push_back(std::move(s));
        }
    }
    return plan;
}

std::string star_string(const std::vector<std::size_t>& surviving_counts,
                        std::size_t star_width, std::size_t out_dim) {
    std::string s;
    for (std::size_t n : surviving_counts) s += std::to_string(n) + "-";
    s += std::to_string(star_width) + "*-" + std::to_string(out_dim);
    return s;
}

} // namespace

std::string architecture_string(const FeatureLevelNet& net) {
    std::vector<std::size_t> counts;
    std::size_t star_width = net.input_dim;
    if (net.compact) {
        for (const auto& layer : net.layers) counts.push_back(layer.weights.cols);
        if (!net.layers.empty()) star_width = net.layers.back().weights.rows;
    } else {
        const RoutingPlan plan = plan_routing(net);
        for (const auto& s : plan.surviving) counts.push_back(s.size());
        if (plan.kept_layers > 0) star_width = net.layers[plan.kept_layers - 1].weights.rows;
    }
    return star_string(counts, star_width, net.output_dim());
}

PruneResult prune(const FeatureLevelNet& net) {
    validate_net(net);
    if (net.compact) return {net, architecture_string(net)};

    const RoutingPlan plan = plan_routing(net);
    const std::size_t kept = plan.kept_layers;
    const auto& old_off = net.head.group_offsets;

    FeatureLevelNet out;
    out.input_dim = net.input_dim;
    out.task = net.task;
    out.compact = true;
    out.head.link = net.head.link;

    // Surviving layers: keep the hidden-path columns, multiply each by its
    // gate estimate (so the saturated replacement gate changes nothing),
    // and record which previous-output columns the layer now consumes.
    for (std::size_t k = 0; k < kept; ++k) {
        const auto& s = plan.surviving[k];
        HiddenLayer layer;
        layer.weights = gather_cols(net.layers[k].weights, s);
        for (std::size_t j = 0; j < s.size(); ++j)
            for (std::size_t r = 0; r < layer.weights.rows; ++r)
                layer.weights(r, j) *= plan.zhat[k][s[j]];
        layer.bias = net.layers[k].bias;
        layer.input_index = s;
        out.layers.push_back(std::move(layer));
        out.gates.emplace_back(s.size(), kSaturatedLogAlpha, net.gates[k].c);
    }

    // Head: each passthrough group shrinks to its routed columns; the new
    // final group is the entire representation reaching the first starved
    // layer (everything there routes to the head), or the last hidden
    // output when no layer starves.
    std::vector<std::size_t> head_cols; // column indices into the old head
    out.head.group_offsets.push_back(0);
    std::size_t width = net.input_dim;
    for (std::size_t k = 0; k < kept; ++k) {
        const auto& s = plan.surviving[k];
        std::size_t p = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (p < s.size() && s[p] == j) ++p;
            else head_cols.push_back(old_off[k] + j);
        }
        out.head.group_offsets.push_back(head_cols.size());
        width = net.layers[k].weights.rows;
    }
    for (std::size_t j = 0; j < width; ++j) head_cols.push_back(old_off[kept] + j);
    out.head.group_offsets.push_back(head_cols.size());

    out.head.weights = gather_cols(net.head.weights, head_cols);
    out.head.bias = net.head.bias;

    // Everything past the first starved layer computes constants: the
    // starved layer's gated input is all-zero, so its output is
    // relu(bias), and each deeper activation follows from the previous
    // constant. Fold every constant head contribution into the bias.
    if (kept < net.depth()) {
        std::vector<double> rep(net.layers[kept].bias.data); // representation after the starved layer
        for (double& v : rep) v = std::max(0.0, v);
        for (std::size_t m = kept + 1; m <= net.depth(); ++m) {
            const std::vector<double>* zh = m < net.depth() ? &plan.zhat[m] : nullptr;
            for (std::size_t j = 0; j < rep.size(); ++j) {
                if (zh && (*zh)[j] != 0.0) continue; // stays on the (dead) hidden path
                for (std::size_t r = 0; r < out.head.bias.cols; ++r)
                    out.head.bias(0, r) += net.head.weights(r, old_off[m] + j) * rep[j];
            }
            if (!zh) break;
            const HiddenLayer& lay = net.layers[m];
            std::vector<double> next(lay.weights.rows);
            for (std::size_t r = 0; r < lay.weights.rows; ++r) {
                double acc = lay.bias(0, r);
                for (std::size_t j = 0; j < rep.size(); ++j)
                    acc += lay.weights(r, j) * ((*zh)[j] * rep[j]);
                next[r] = std::max(0.0, acc);
            }
            rep = std::move(next);
        }
    }

    validate_net(out);
    std::vector<std::size_t> counts;
    for (const auto& s : plan.surviving) counts.push_back(s.size());
    const std::size_t star_width = kept == 0 ? net.input_dim : net.layers[kept - 1].weights.rows;
    return {std::move(out), star_string(counts, star_width, net.output_dim())};
}

} // namespace fln
