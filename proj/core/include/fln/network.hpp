#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fln/gates.hpp"
#include "fln/loss.hpp"
#include "fln/matrix.hpp"
#include "fln/rng.hpp"

namespace fln {

enum class TaskKind { regression, binary, multiclass };
enum class LinkKind { identity, sigmoid, softmax };

const char* to_string(TaskKind task);
const char* to_string(LinkKind link);
TaskKind task_from_string(const std::string& s);   // throws ArgumentError
LinkKind link_from_string(const std::string& s);   // throws ArgumentError

/// Fully connected ReLU layer.
///
/// input_index is empty for a freshly built network (the layer consumes the
/// whole previous output, with its gate deciding feature routing). After
/// pruning it lists, in increasing order, which columns of the previous
/// output feed this layer; the complement is routed straight to the head.
struct HiddenLayer {
    Matrix weights; // out_dim × in_dim
    Matrix bias;    // 1 × out_dim
    std::vector<std::size_t> input_index;
};

/// Final generalized-linear decision layer over the concatenation of all
/// per-level passthrough groups plus the last hidden output.
struct GLMHead {
    Matrix weights; // out_dim × D
    Matrix bias;    // 1 × out_dim
    LinkKind link = LinkKind::softmax;
    /// K+2 boundaries partitioning [0, D) into K+1 contiguous groups:
    /// group k (1-based) spans [group_offsets[k-1], group_offsets[k]).
    std::vector<std::size_t> group_offsets;
};

/// Feature-leveling network: K gated hidden layers and a GLM head.
///
/// At level k each feature of the incoming representation is either scaled
/// by its gate value into hidden layer k (gate > 0) or, when the gate is
/// exactly 0, passed through untouched to the GLM head, which therefore
/// sees features of every level side by side.
struct FeatureLevelNet {
    std::size_t input_dim = 0;
    std::vector<HiddenLayer> layers;     // K layers
    std::vector<HardConcreteGate> gates; // gate k sizes layer k's input
    GLMHead head;
    TaskKind task = TaskKind::multiclass;
    /// Set by pruning: passthrough groups are compacted to the routed
    /// columns only and layers consume explicit column subsets.
    bool compact = false;

    std::size_t depth() const { return layers.size(); }
    std::size_t output_dim() const { return head.weights.rows; }
    std::size_t glm_width() const { return head.weights.cols; }
};

/// He-initialized network: weights ~ N(0, sqrt(2/fan_in)), biases zero,
/// head zero, log_alpha = init_log_alpha + init_log_alpha_jitter * N(0,1).
/// The default init keeps every gate essentially open at the start.
FeatureLevelNet make_net(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                         std::size_t out_dim, TaskKind task, LinkKind link, Rng& rng,
                         double init_log_alpha = 2.3, double init_log_alpha_jitter = 0.01,
                         GateConstants gate_constants = {});

/// Checks every structural invariant (dimension chains, gate sizes, group
/// offsets, finiteness); throws ValidationError naming the offender.
void validate_net(const FeatureLevelNet& net);

/// The loss implied by the head link: identity→mse, sigmoid→bce,
/// softmax→softmax cross-entropy.
LossKind loss_kind_for(const FeatureLevelNet& net);

/// Everything the backward pass needs from one stochastic forward pass.
struct ForwardCache {
    Matrix x;                          // input batch
    std::vector<GateSample> samples;   // per level
    std::vector<std::vector<double>> bz;       // B(z) per level (dense nets)
    std::vector<Matrix> gathered;      // layer k input before gate scaling
    std::vector<Matrix> gated;         // layer k input after gate scaling
    std::vector<Matrix> pre;           // pre-activation of layer k
    std::vector<Matrix> hidden;        // hidden[0] = x, hidden[k] = h_k
    Matrix glm_input;                  // concatenated head input
    Matrix logits;                     // pre-link head output
    double lambda_eff = 0.0;           // penalty weight seen by backward()
};

/// Stochastic forward pass: samples one noise vector per gate (shared by
/// the whole batch), routes features, and returns the post-link output
/// plus the cache for backward(). Output rows are probabilities for the
/// sigmoid/softmax links and raw values for the identity link.
std::pair<Matrix, ForwardCache> forward_train(const FeatureLevelNet& net,
                                              const Matrix& batch, Rng& rng);

/// forward_train with injected gate noise (u values already in (δ, 1-δ)),
/// one vector per level; used by gradient checks and reproducibility tests.
std::pair<Matrix, ForwardCache> forward_train_with_noise(
    const FeatureLevelNet& net, const Matrix& batch,
    const std::vector<std::vector<double>>& noise);

/// Deterministic forward pass using the noise-free gate estimator;
/// bit-identical across repeated calls.
Matrix forward_eval(const FeatureLevelNet& net, const Matrix& batch);

/// Mean data loss plus (lambda / K) * sum over gates of the expected open
/// count. Stores lambda in the cache so backward() applies the matching
/// penalty gradient.
std::pair<double, ForwardCache> objective(const FeatureLevelNet& net, const Matrix& batch,
                                          const Matrix& targets, double lambda, Rng& rng);

/// Same, replaying fixed gate noise (for finite-difference checks).
std::pair<double, ForwardCache> objective_with_noise(
    const FeatureLevelNet& net, const Matrix& batch, const Matrix& targets,
    double lambda, const std::vector<std::vector<double>>& noise);

/// Gradients for every parameter, in the same layout as the network.
struct Gradients {
    std::vector<Matrix> layer_weights;
    std::vector<Matrix> layer_bias;
    std::vector<std::vector<double>> gate_log_alpha;
    Matrix head_weights;
    Matrix head_bias;
};

/// Exact reverse-mode gradients of the objective under the declared
/// conventions: the binary complement is piecewise constant, the clamp has
/// zero gradient outside (0,1), gate values receive gradient only through
/// the hidden path, and log_alpha additionally receives the closed-form
/// penalty gradient weighted by cache.lambda_eff / K.
Gradients backward(const FeatureLevelNet& net, const ForwardCache& cache,
                   const Matrix& targets);

} // namespace fln
