#pragma once

#include <string>

#include "fln/network.hpp"

namespace fln {

struct PruneResult {
    FeatureLevelNet net;
    std::string architecture;
};

/// Makes the trained routing structural, without changing the function the
/// network computes (noise-free outputs agree to rounding error):
///   - every feature whose gate estimate is exactly 0 leaves its layer and
///     its head passthrough column is kept; columns of features that stay
///     on the hidden path (estimate > 0) are dropped from the head;
///   - surviving gate estimates are baked into the layer weight columns
///     and the gates are re-saturated fully open;
///   - a layer left with zero inputs computes a constant, so it and every
///     deeper layer are removed and their constant contribution is folded
///     into the head bias; the last surviving hidden output becomes the
///     final head group.
/// Pruning an already-compact network returns an unchanged copy.
PruneResult prune(const FeatureLevelNet& net);

/// Star notation for the (possibly hypothetical) pruned architecture:
/// "n1-...-nk-w*-out" lists each kept layer's surviving input count, then
/// the width of the last kept hidden layer starred (its effective head
/// width includes every passthrough group), then the output dimension.
/// For a dense network this reports what prune() would produce.
std::string architecture_string(const FeatureLevelNet& net);

} // namespace fln
