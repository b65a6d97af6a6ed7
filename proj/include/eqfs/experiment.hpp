#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eqfs/classifier.hpp"
#include "eqfs/dataset.hpp"
#include "eqfs/evolution.hpp"
#include "eqfs/run_record.hpp"

namespace eqfs {

struct PreparedData {
    Dataset data;
    SplitDataset split;
    DatasetInfo info;
};

PreparedData prepare_data(const std::filesystem::path& path, const std::string& label, double test_fraction,
                          std::uint64_t split_seed);
/// Same, for an in-memory dataset; `name` stands in for the path.
PreparedData prepare_data(Dataset data, const std::string& name, double test_fraction, std::uint64_t split_seed);

struct ExperimentConfig {
    EvolutionConfig evolution;
    EvaluatorSpec evaluator;
    /// Repeat i runs with seed evolution.seed + i.
    int repeat = 1;
    int threads = 1;
    /// Records go to record_<i>.json plus aggregate.json; empty disables writing.
    std::filesystem::path out_dir;
};

struct Aggregate {
    std::size_t records = 0;
    std::vector<double> mean_best_accuracy;
    std::vector<double> std_best_accuracy;
    std::vector<double> mean_support_count;
    std::vector<double> mean_cumulative_evaluations;
    double mean_auc = 0.0;
    double std_auc = 0.0;
    double predicted_auc = 0.0;
    double mean_final_depth = 0.0;
    double mean_cache_size = 0.0;
};

/// Population statistics across records; every record must hold the same
/// number of generations.
Aggregate aggregate(const std::vector<RunRecord>& records);

std::string serialize(const Aggregate& aggregate, const std::vector<double>& wall_clock_seconds);

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<double> wall_clock_seconds;
    Aggregate summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& prepared);

inline constexpr int oracle_max_features = 20;

struct OracleRecord {
    int n = 0;
    /// Indexed by mask bits.
    std::vector<double> accuracies;
    FeatureMask argmax;
    double max_accuracy = 0.0;
    DatasetInfo dataset;
    EvaluatorSpec evaluator;
};

/// Scores all 2^n masks; argmax is the lowest-index maximizer.
OracleRecord run_oracle(const PreparedData& prepared, const EvaluatorSpec& spec, int threads = 1);
std::string serialize(const OracleRecord& record);

/// Per-generation CSV, final-distribution table of the best record, AUC line.
void render_report(const std::vector<RunRecord>& records, std::ostream& out);

}  // namespace eqfs
