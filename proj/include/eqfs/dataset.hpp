#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eqfs/feature_mask.hpp"

namespace eqfs {

/// Dense row-major real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Dataset {
    std::vector<std::string> feature_names;
    Matrix features;
    /// Dense class indices, assigned in order of first appearance.
    std::vector<int> labels;
    std::vector<std::string> class_names;
    /// FNV-1a 64 over the source bytes, hex encoded.
    std::string digest;

    std::size_t rows() const noexcept { return features.rows(); }
    int feature_count() const noexcept { return static_cast<int>(features.cols()); }
    int class_count() const noexcept { return static_cast<int>(class_names.size()); }
};

/// Label column given by header name or 0-based index.
struct LabelColumn {
    std::variant<std::string, std::size_t> selector;

    /// All-digit text is an index, anything else a name.
    static LabelColumn parse(const std::string& text);
};

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label);
Dataset parse_csv(const std::string& content, const LabelColumn& label);

/// Builds a dataset from in-memory columns; labels must already be dense.
Dataset make_dataset(Matrix features, std::vector<int> labels, std::vector<std::string> feature_names = {});

std::string fnv1a_hex(std::string_view bytes);

struct SplitDataset {
    Matrix train;
    std::vector<int> train_labels;
    Matrix test;
    std::vector<int> test_labels;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    /// Per-feature train statistics (population standard deviation).
    std::vector<double> mean;
    std::vector<double> stddev;
    /// train/test after standardizing with the train statistics; constant
    /// columns are centered only.
    Matrix train_standardized;
    Matrix test_standardized;
    int class_count = 0;

    int feature_count() const noexcept { return static_cast<int>(mean.size()); }
};

/// Per-class shuffled split with floor allocation and a largest-class top-up
/// so the test set holds round(test_fraction * rows) rows.
SplitDataset stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed);

/// Standardizes a split built from explicit row partitions.
SplitDataset split_rows(const Dataset& data, std::vector<std::size_t> train_rows,
                        std::vector<std::size_t> test_rows);

Matrix apply_mask(const Matrix& rows, const FeatureMask& mask);

}  // namespace eqfs
