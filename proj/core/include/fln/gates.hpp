#pragma once

#include <cstddef>
#include <vector>

#include "fln/rng.hpp"

namespace fln {

/// Distribution constants of the stretched hard-concrete relaxation.
/// gamma < 0 < 1 < zeta stretches the sigmoid output so that clamping to
/// [0,1] leaves strictly positive probability mass at exactly 0 and 1.
struct GateConstants {
    double beta = 2.0 / 3.0; // temperature, > 0
    double gamma = -0.1;     // stretch lower bound, < 0
    double zeta = 1.1;       // stretch upper bound, > 1
};

/// log_alpha large enough that both the sampled and the noise-free gate
/// value round to exactly 1.0 at the default constants, even for the most
/// adverse noise draw. Pins a gate permanently open (plain-network
/// baselines, survivors after pruning).
inline constexpr double kSaturatedLogAlpha = 40.0;

/// A vector of per-feature stochastic gates with shared constants.
///
/// Each entry j holds the location parameter log_alpha[j]; a sampled gate
/// value z[j] multiplies feature j on its way into the next layer, and
/// z[j] == 0.0 exactly reroutes the feature to the final decision layer.
struct HardConcreteGate {
    std::vector<double> log_alpha;
    GateConstants c;

    HardConcreteGate() = default;
    HardConcreteGate(std::size_t n, double init_log_alpha, GateConstants consts = {})
        : log_alpha(n, init_log_alpha), c(consts) {}

    std::size_t size() const { return log_alpha.size(); }
};

/// One draw of every gate in the vector, with the intermediates needed by
/// the backward pass. Invariant: z[j] == min(1, max(0, s[j])).
struct GateSample {
    std::vector<double> u; // logistic-noise uniforms, clamped into (δ, 1-δ)
    std::vector<double> s; // stretched pre-clamp values
    std::vector<double> z; // clamped gate values in [0, 1]
};

/// Samples every gate: u ~ U(δ, 1-δ) with δ = 1e-6,
/// sbar = sigmoid((log(u/(1-u)) + log_alpha) / beta),
/// s = sbar*(zeta-gamma) + gamma, z = clamp(s, 0, 1).
GateSample sample(const HardConcreteGate& gate, Rng& rng);

/// Deterministic replay of `sample` from given noise (u already in (δ,1-δ));
/// used by gradient checks and tests.
GateSample sample_from_noise(const HardConcreteGate& gate, const std::vector<double>& u);

/// Noise-free test-time estimator:
/// zhat = clamp(sigmoid(log_alpha)*(zeta-gamma) + gamma, 0, 1).
/// Used for all evaluation, reporting and pruning.
std::vector<double> deterministic(const HardConcreteGate& gate);

/// Closed-form expected number of open gates and its gradient.
struct ExpectedL0 {
    double total;              // sum over j of P(z[j] != 0)
    std::vector<double> grad;  // d total / d log_alpha[j] = p_j (1 - p_j)
};

/// P(z[j] != 0) = sigmoid(log_alpha[j] - beta * log(-gamma/zeta)), summed.
ExpectedL0 expected_l0(const HardConcreteGate& gate);

/// B(z)[j] = 1.0 iff z[j] == 0.0 exactly, else 0.0. Piecewise constant:
/// carries zero gradient by definition, so B(z)[j] * z[j] == 0 always.
std::vector<double> binary_complement(const std::vector<double>& z);

/// Chain rule through the sampled gate: returns upstream ⊙ dz/dlog_alpha,
/// where dz/dlog_alpha[j] = (1/beta) * sbar_j (1-sbar_j) * (zeta-gamma)
/// when 0 < s[j] < 1 strictly, and 0 in the clamped regions.
std::vector<double> sample_backward(const GateSample& sample,
                                    const HardConcreteGate& gate,
                                    const std::vector<double>& upstream);

} // namespace fln
