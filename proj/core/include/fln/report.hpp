#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fln/data.hpp"
#include "fln/metrics.hpp"
#include "fln/network.hpp"

namespace fln {

/// Interpretability statistics for one feature level. Levels are 1-based;
/// level K+1 is the final hidden group feeding the GLM head.
struct LevelStat {
    std::size_t level = 0;
    std::size_t size = 0;      // features at this level
    std::size_t routed = 0;    // features routed to the head (gate exactly 0)
    double percent = 0.0;      // 100 * routed / size
    std::optional<double> aav; // mean |head weight| over the level's routed columns
};

struct LevelReport {
    MetricKind metric_kind = MetricKind::accuracy;
    double metric_value = 0.0;
    std::string architecture;
    std::vector<LevelStat> levels;
};

/// Mean absolute GLM weight per level (averaged over all output rows).
/// Level k <= K covers the head columns of features the gates route to
/// the head; the final level covers the whole last group. A level with no
/// routed features yields an absent value, never 0.
std::vector<std::optional<double>> aav_per_level(const FeatureLevelNet& net);

/// Per-level sizes and routed counts. Shares its arithmetic with prune()
/// and architecture_string(); aav is left unset.
std::vector<LevelStat> gate_stats(const FeatureLevelNet& net);

enum class HeatmapFormat { csv, pgm };

/// CSV of raw values at full precision, or binary PGM (P5) mapping
/// [-max|v|, +max|v|] linearly onto [0, 255], so 0 lands on the midtone.
void export_heatmap(const Matrix& m, const std::string& path, HeatmapFormat format);

/// Evaluates the network on a test set and aggregates the metric, gate
/// statistics, per-level AAVs and the star architecture string.
LevelReport full_report(const FeatureLevelNet& net, const Dataset& test, MetricKind kind);

/// Report as a JSON document; a non-empty config_json (serialized object)
/// is embedded under "config".
std::string report_to_json(const LevelReport& report, const std::string& config_json = "");

} // namespace fln
