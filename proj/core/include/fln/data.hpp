#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fln/matrix.hpp"
#include "fln/network.hpp"

namespace fln {

/// Z-scoring statistics applied to a dataset, kept for reporting.
struct NormStats {
    std::vector<std::size_t> feature_cols; // which feature columns were z-scored
    std::vector<double> mean;              // aligned with feature_cols
    std::vector<double> stddev;
    double target_mean = 0.0;
    double target_std = 1.0;
    bool target_scaled = false;
    std::string mode; // "full" (stats over all retained rows) or "train_only"
};

/// Feature matrix plus labels. Labels hold class indices for multiclass,
/// 0/1 for binary, or real targets for regression, one per feature row.
struct Dataset {
    Matrix features;
    std::vector<double> labels;
    TaskKind task = TaskKind::multiclass;
    std::vector<std::string> feature_names;
    std::optional<NormStats> norm;

    std::size_t size() const { return features.rows; }
    std::size_t dim() const { return features.cols; }
};

/// Synthetic "independent XOR" task: x1, x2 ~ U[-2,2), x3 ~ U[0,1);
/// label 1 iff x1*x2 > 0 and x3 > 0.5. The XOR pair needs a nonlinear
/// transformation while x3 alone is linearly informative.
Dataset gen_ixor(std::size_t n, std::uint64_t seed);

/// IDX-format image/label pair (big-endian, magics 2051/2049). Pixels are
/// scaled into [0,1] by 1/255; labels are the stored class bytes.
Dataset load_mnist(const std::string& images_path, const std::string& labels_path);

/// Binary-format batches of 3073-byte records (1 label byte + 32x32x3
/// pixels). Keeps the two requested classes, mapping class_a -> 0 and
/// class_b -> 1; pixels scaled into [0,1].
Dataset load_cifar10_binary(const std::vector<std::string>& batch_paths,
                            unsigned class_a = 3, unsigned class_b = 4);

/// Housing CSV with 8 numeric feature columns, one 5-category nominal
/// column (one-hot encoded, alphabetical category order) and a numeric
/// target column. Rows with any empty field are dropped. With
/// normalize=true the numeric features and the target are z-scored using
/// statistics over all retained rows (mode "full"); with false the values
/// stay raw so a caller can normalize after splitting.
Dataset load_cal_housing(const std::string& csv_path, bool normalize = true);

/// Z-scores the numeric columns and target of both splits using statistics
/// computed on the training split only (mode "train_only"). Requires a
/// dataset loaded with normalize=false.
void normalize_from_train(Dataset& train, Dataset& test);

/// Generic numeric CSV with a header row. The target column is "label" if
/// present, else "target" if present, else the last column.
Dataset load_csv(const std::string& csv_path, TaskKind task);

/// Seeded shuffle, then split at floor(train_fraction * N).
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed);

/// Rows of ds at the given indices, in order (labels included).
Dataset gather_rows(const Dataset& ds, const std::vector<std::size_t>& idx);

} // namespace fln
