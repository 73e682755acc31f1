#include "fln/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "fln/errors.hpp"
#include "fln/io.hpp"
#include "fln/rng.hpp"

namespace fln {

namespace {

double parse_number(const std::string& field, std::size_t row, const std::string& col) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size() || field.empty())
        throw ParseError("row " + std::to_string(row) + ", column \"" + col +
                         "\": not a number: \"" + field + "\"");
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

/// Non-empty lines of a text file, split into trimmed comma fields.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::vector<std::string>> rows;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string line = text.substr(start, i - start);
            start = i + 1;
            if (!trim(line).empty()) rows.push_back(split_line(line));
        }
    }
    if (rows.empty()) throw ParseError("csv file is empty: " + path);
    return rows;
}

std::uint32_t be_u32(const std::string& bytes, std::size_t off) {
    return (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off])) << 24) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 8) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3]));
}

void zscore(Dataset& ds, const std::vector<double>& mean, const std::vector<double>& stddev,
            double tmean, double tstd) {
    const auto& cols = ds.norm->feature_cols;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t c = 0; c < cols.size(); ++c)
            ds.features(i, cols[c]) = (ds.features(i, cols[c]) - mean[c]) / stddev[c];
    for (double& y : ds.labels) y = (y - tmean) / tstd;
    ds.norm->mean = mean;
    ds.norm->stddev = stddev;
    ds.norm->target_mean = tmean;
    ds.norm->target_std = tstd;
    ds.norm->target_scaled = true;
}

void column_stats(const Dataset& ds, std::vector<double>& mean, std::vector<double>& stddev,
                  double& tmean, double& tstd) {
    const auto& cols = ds.norm->feature_cols;
    const double n = static_cast<double>(ds.size());
    mean.assign(cols.size(), 0.0);
    stddev.assign(cols.size(), 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t c = 0; c < cols.size(); ++c) mean[c] += ds.features(i, cols[c]);
    for (double& m : mean) m /= n;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double d = ds.features(i, cols[c]) - mean[c];
            stddev[c] += d * d;
        }
    for (double& s : stddev) s = std::sqrt(s / n);
    for (double& s : stddev)
        if (!(s > 0.0)) s = 1.0; // constant column: leave it centered only
    tmean = std::accumulate(ds.labels.begin(), ds.labels.end(), 0.0) / n;
    double acc = 0.0;
    for (double y : ds.labels) acc += (y - tmean) * (y - tmean);
    tstd = std::sqrt(acc / n);
    if (!(tstd > 0.0)) tstd = 1.0;
}

} // namespace

Dataset gen_ixor(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ArgumentError("gen_ixor: n must be >= 1");
    Dataset ds;
    ds.task = TaskKind::binary;
    ds.feature_names = {"x1", "x2", "x3"};
    ds.features = Matrix(n, 3);
    ds.labels.resize(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = rng.uniform(-2.0, 2.0);
        const double x2 = rng.uniform(-2.0, 2.0);
        const double x3 = rng.uniform(0.0, 1.0);
        ds.features(i, 0) = x1;
        ds.features(i, 1) = x2;
        ds.features(i, 2) = x3;
        ds.labels[i] = (x1 * x2 > 0.0 && x3 > 0.5) ? 1.0 : 0.0;
    }
    return ds;
}

Dataset load_mnist(const std::string& images_path, const std::string& labels_path) {
    const std::string img = read_file(images_path);
    const std::string lab = read_file(labels_path);
    if (img.size() < 16)
        throw ParseError("images file too short for an IDX header: " + images_path);
    if (lab.size() < 8)
        throw ParseError("labels file too short for an IDX header: " + labels_path);
    const std::uint32_t img_magic = be_u32(img, 0);
    if (img_magic != 2051)
        throw ParseError("images file " + images_path + ": expected magic 2051, found " +
                         std::to_string(img_magic));
    const std::uint32_t lab_magic = be_u32(lab, 0);
    if (lab_magic != 2049)
        throw ParseError("labels file " + labels_path + ": expected magic 2049, found " +
                         std::to_string(lab_magic));
    const std::size_t n = be_u32(img, 4);
    const std::size_t h = be_u32(img, 8);
    const std::size_t w = be_u32(img, 12);
    const std::size_t n_lab = be_u32(lab, 4);
    if (n != n_lab)
        throw ParseError("images file has " + std::to_string(n) + " items but labels file has " +
                         std::to_string(n_lab));
    if (img.size() != 16 + n * h * w)
        throw ParseError("images file " + images_path + ": expected " +
                         std::to_string(16 + n * h * w) + " bytes, found " +
                         std::to_string(img.size()));
    if (lab.size() != 8 + n)
        throw ParseError("labels file " + labels_path + ": expected " +
                         std::to_string(8 + n) + " bytes, found " + std::to_string(lab.size()));

    Dataset ds;
    ds.task = TaskKind::multiclass;
    ds.features = Matrix(n, h * w);
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n * h * w; ++i)
        ds.features.data[i] = static_cast<unsigned char>(img[16 + i]) / 255.0;
    for (std::size_t i = 0; i < n; ++i)
        ds.labels[i] = static_cast<unsigned char>(lab[8 + i]);
    ds.feature_names.reserve(h * w);
    for (std::size_t i = 0; i < h * w; ++i) ds.feature_names.push_back("px" + std::to_string(i));
    return ds;
}

Dataset load_cifar10_binary(const std::vector<std::string>& batch_paths,
                            unsigned class_a, unsigned class_b) {
    constexpr std::size_t kRecord = 3073; // 1 label byte + 3072 pixel bytes
    if (batch_paths.empty()) throw ArgumentError("load_cifar10_binary: no batch files given");
    if (class_a == class_b) throw ArgumentError("load_cifar10_binary: classes must differ");

    std::vector<std::pair<double, std::vector<double>>> kept;
    for (const auto& path : batch_paths) {
        const std::string bytes = read_file(path);
        if (bytes.size() % kRecord != 0)
            throw ParseError("batch file " + path + ": size " + std::to_string(bytes.size()) +
                             " is not a multiple of the " + std::to_string(kRecord) +
                             "-byte record");
        const std::size_t n = bytes.size() / kRecord;
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned label = static_cast<unsigned char>(bytes[i * kRecord]);
            if (label != class_a && label != class_b) continue;
            std::vector<double> px(3072);
            for (std::size_t j = 0; j < 3072; ++j)
                px[j] = static_cast<unsigned char>(bytes[i * kRecord + 1 + j]) / 255.0;
            kept.emplace_back(label == class_a ? 0.0 : 1.0, std::move(px));
        }
    }

    Dataset ds;
    ds.task = TaskKind::binary;
    ds.features = Matrix(kept.size(), 3072);
    ds.labels.resize(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        ds.labels[i] = kept[i].first;
        for (std::size_t j = 0; j < 3072; ++j) ds.features(i, j) = kept[i].second[j];
    }
    ds.feature_names.reserve(3072);
    for (std::size_t i = 0; i < 3072; ++i) ds.feature_names.push_back("px" + std::to_string(i));
    return ds;
}

Dataset load_cal_housing(const std::string& csv_path, bool normalize) {
    const auto rows = read_csv(csv_path);
    const auto& header = rows[0];

    const std::string kNominal = "ocean_proximity";
    const std::string kTarget = "median_house_value";
    // Alphabetical, the one-hot column order.
    const std::vector<std::string> kCategories = {"<1H OCEAN", "INLAND", "ISLAND",
                                                  "NEAR BAY", "NEAR OCEAN"};

    std::size_t nominal_col = header.size(), target_col = header.size();
    std::vector<std::size_t> numeric_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == kNominal) nominal_col = c;
        else if (header[c] == kTarget) target_col = c;
        else numeric_cols.push_back(c);
    }
    if (nominal_col == header.size())
        throw ParseError("csv " + csv_path + ": missing column \"" + kNominal + "\"");
    if (target_col == header.size())
        throw ParseError("csv " + csv_path + ": missing column \"" + kTarget + "\"");

    const std::size_t d = numeric_cols.size() + kCategories.size();
    std::vector<double> values;
    std::vector<double> labels;
    std::size_t retained = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw ParseError("row " + std::to_string(r) + ": expected " +
                             std::to_string(header.size()) + " fields, found " +
                             std::to_string(row.size()));
        const bool has_empty =
            std::any_of(row.begin(), row.end(), [](const std::string& f) { return f.empty(); });
        if (has_empty) continue; // drop rows with any empty entry
        for (std::size_t c : numeric_cols)
            values.push_back(parse_number(row[c], r, header[c]));
        const auto cat = std::find(kCategories.begin(), kCategories.end(), row[nominal_col]);
        if (cat == kCategories.end())
            throw ParseError("row " + std::to_string(r) + ": unknown " + kNominal +
                             " category \"" + row[nominal_col] + "\"");
        for (const auto& name : kCategories)
            values.push_back(name == row[nominal_col] ? 1.0 : 0.0);
        labels.push_back(parse_number(row[target_col], r, header[target_col]));
        ++retained;
    }
    if (retained == 0) throw ParseError("csv " + csv_path + ": no usable rows");

    Dataset ds;
    ds.task = TaskKind::regression;
    ds.features = Matrix(retained, d);
    ds.features.data = std::move(values);
    ds.labels = std::move(labels);
    for (std::size_t c : numeric_cols) ds.feature_names.push_back(header[c]);
    for (const auto& name : kCategories) ds.feature_names.push_back(kNominal + "=" + name);

    NormStats norm;
    for (std::size_t c = 0; c < numeric_cols.size(); ++c) norm.feature_cols.push_back(c);
    norm.mode = normalize ? "full" : "none";
    ds.norm = std::move(norm);
    if (normalize) {
        std::vector<double> mean, stddev;
        double tmean = 0.0, tstd = 1.0;
        column_stats(ds, mean, stddev, tmean, tstd);
        zscore(ds, mean, stddev, tmean, tstd);
        ds.norm->mode = "full";
    }
    return ds;
}

void normalize_from_train(Dataset& train, Dataset& test) {
    if (!train.norm || !test.norm)
        throw ArgumentError("normalize_from_train: datasets carry no normalization plan");
    if (train.norm->mode != "none")
        throw ArgumentError("normalize_from_train: dataset is already normalized (mode \"" +
                            train.norm->mode + "\")");
    std::vector<double> mean, stddev;
    double tmean = 0.0, tstd = 1.0;
    column_stats(train, mean, stddev, tmean, tstd);
    zscore(train, mean, stddev, tmean, tstd);
    zscore(test, mean, stddev, tmean, tstd);
    train.norm->mode = "train_only";
    test.norm->mode = "train_only";
}

Dataset load_csv(const std::string& csv_path, TaskKind task) {
    const auto rows = read_csv(csv_path);
    const auto& header = rows[0];
    std::size_t target_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == "label") target_col = c;
    if (target_col == header.size())
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == "target") target_col = c;
    if (target_col == header.size()) target_col = header.size() - 1;
    if (header.size() < 2)
        throw ParseError("csv " + csv_path + ": need at least one feature and one target column");

    Dataset ds;
    ds.task = task;
    const std::size_t d = header.size() - 1;
    ds.features = Matrix(rows.size() - 1, d);
    ds.labels.resize(rows.size() - 1);
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != target_col) ds.feature_names.push_back(header[c]);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw ParseError("row " + std::to_string(r) + ": expected " +
                             std::to_string(header.size()) + " fields, found " +
                             std::to_string(rows[r].size()));
        std::size_t j = 0;
        for (std::size_t c = 0; c < header.size(); ++c) {
            const double v = parse_number(rows[r][c], r, header[c]);
            if (c == target_col) ds.labels[r - 1] = v;
            else ds.features(r - 1, j++) = v;
        }
    }
    return ds;
}

Dataset gather_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.task = ds.task;
    out.feature_names = ds.feature_names;
    out.norm = ds.norm;
    out.features = Matrix(idx.size(), ds.dim());
    out.labels.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= ds.size())
            throw RangeError("gather_rows: index " + std::to_string(idx[i]) +
                             " out of range for " + std::to_string(ds.size()) + " rows");
        for (std::size_t j = 0; j < ds.dim(); ++j) out.features(i, j) = ds.features(idx[i], j);
        out.labels[i] = ds.labels[idx[i]];
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed) {
    const std::size_t n = ds.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    const std::size_t train_n = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
    if (train_n == 0 || train_n >= n)
        throw ArgumentError("split: fraction " + std::to_string(train_fraction) +
                            " leaves an empty split for " + std::to_string(n) + " rows");
    std::vector<std::size_t> a(perm.begin(), perm.begin() + static_cast<long>(train_n));
    std::vector<std::size_t> b(perm.begin() + static_cast<long>(train_n), perm.end());
    return {gather_rows(ds, a), gather_rows(ds, b)};
}

} // namespace fln
