#include "fln/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "fln/errors.hpp"
#include "fln/io.hpp"
#include "fln/prune.hpp"

namespace fln {

namespace {

/// Head-column ranges and routed columns per level, valid for both dense
/// and compact networks. For a dense network the routed columns of level
/// k are those whose gate estimate is exactly 0; for a compact one every
/// column still present in group k is routed by construction.
struct LevelColumns {
    std::size_t size;                 // feature count at this level
    std::vector<std::size_t> routed;  // head column indices of routed features
};

std::vector<LevelColumns> level_columns(const FeatureLevelNet& net) {
    const auto& off = net.head.group_offsets;
    const std::size_t depth = net.depth();
    std::vector<LevelColumns> out;
    for (std::size_t k = 0; k < depth; ++k) {
        LevelColumns lc;
        const std::size_t group = off[k + 1] - off[k];
        if (net.compact) {
            lc.size = group + net.layers[k].weights.cols;
            for (std::size_t j = 0; j < group; ++j) lc.routed.push_back(off[k] + j);
        } else {
            lc.size = group;
            const auto zhat = deterministic(net.gates[k]);
            for (std::size_t j = 0; j < group; ++j)
                if (zhat[j] == 0.0) lc.routed.push_back(off[k] + j);
        }
        out.push_back(std::move(lc));
    }
    LevelColumns last;
    last.size = off[depth + 1] - off[depth];
    out.push_back(std::move(last)); // final group: nothing "routed", all consumed by the head
    return out;
}

double mean_abs_weight(const Matrix& w, const std::vector<std::size_t>& cols) {
    double acc = 0.0;
    for (std::size_t r = 0; r < w.rows; ++r)
        for (std::size_t c : cols) acc += std::abs(w(r, c));
    return acc / (static_cast<double>(w.rows) * static_cast<double>(cols.size()));
}

} // namespace

std::vector<std::optional<double>> aav_per_level(const FeatureLevelNet& net) {
    const auto levels = level_columns(net);
    const auto& off = net.head.group_offsets;
    std::vector<std::optional<double>> out;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const bool final_level = (k + 1 == levels.size());
        if (final_level) {
            std::vector<std::size_t> cols;
            for (std::size_t j = off[k]; j < off[k + 1]; ++j) cols.push_back(j);
            out.push_back(cols.empty() ? std::optional<double>{}
                                       : std::optional<double>{mean_abs_weight(net.head.weights, cols)});
        } else if (levels[k].routed.empty()) {
            out.push_back(std::nullopt);
        } else {
            out.push_back(mean_abs_weight(net.head.weights, levels[k].routed));
        }
    }
    return out;
}

std::vector<LevelStat> gate_stats(const FeatureLevelNet& net) {
    const auto levels = level_columns(net);
    std::vector<LevelStat> out;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        LevelStat st;
        st.level = k + 1;
        st.size = levels[k].size;
        st.routed = levels[k].routed.size();
        st.percent = st.size == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(st.routed) / static_cast<double>(st.size);
        out.push_back(st);
    }
    return out;
}

void export_heatmap(const Matrix& m, const std::string& path, HeatmapFormat format) {
    if (!all_finite(m)) throw NumericError("export_heatmap: matrix has non-finite entries");
    if (format == HeatmapFormat::csv) {
        std::ostringstream o;
        char buf[64];
        for (std::size_t i = 0; i < m.rows; ++i) {
            for (std::size_t j = 0; j < m.cols; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
                o << (j ? "," : "") << buf;
            }
            o << "\n";
        }
        write_file_atomic(path, o.str());
        return;
    }
    double peak = 0.0;
    for (double v : m.data) peak = std::max(peak, std::abs(v));
    std::string bytes;
    bytes.reserve(m.size() + 32);
    bytes += "P5\n" + std::to_string(m.cols) + " " + std::to_string(m.rows) + "\n255\n";
    for (double v : m.data) {
        long px = peak == 0.0 ? 128 : std::lround((v + peak) / (2.0 * peak) * 255.0);
        px = std::min(255L, std::max(0L, px));
        bytes.push_back(static_cast<char>(static_cast<unsigned char>(px)));
    }
    write_file_atomic(path, bytes);
}

LevelReport full_report(const FeatureLevelNet& net, const Dataset& test, MetricKind kind) {
    LevelReport report;
    report.metric_kind = kind;
    report.metric_value = metric(kind, forward_eval(net, test.features), test.labels);
    report.architecture = architecture_string(net);
    report.levels = gate_stats(net);
    const auto aavs = aav_per_level(net);
    for (std::size_t k = 0; k < report.levels.size(); ++k) report.levels[k].aav = aavs[k];
    return report;
}

std::string report_to_json(const LevelReport& report, const std::string& config_json) {
    nlohmann::ordered_json j;
    j["metric"] = {{"kind", to_string(report.metric_kind)}, {"value", report.metric_value}};
    j["architecture"] = report.architecture;
    j["levels"] = nlohmann::ordered_json::array();
    for (const auto& st : report.levels) {
        nlohmann::ordered_json lv;
        lv["level"] = st.level;
        lv["size"] = st.size;
        lv["routed"] = st.routed;
        lv["percent"] = st.percent;
        if (st.aav) lv["aav"] = *st.aav;
        else lv["aav"] = nullptr;
        j["levels"].push_back(std::move(lv));
    }
    if (!config_json.empty()) {
        try {
            j["config"] = nlohmann::ordered_json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
            throw ArgumentError(std::string("report_to_json: config is not valid JSON: ") +
                                e.what());
        }
    }
    return j.dump(2) + "\n";
}

} // namespace fln
