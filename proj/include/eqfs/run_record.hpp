#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqfs/classifier.hpp"
#include "eqfs/evolution.hpp"
#include "eqfs/feature_mask.hpp"
#include "eqfs/simulator.hpp"

namespace eqfs {

inline constexpr int run_record_version = 1;

struct DatasetInfo {
    std::string path;
    std::string label;
    std::string digest;
    std::uint64_t rows = 0;
    int features = 0;
    double test_fraction = 0.2;
    std::uint64_t split_seed = 0;

    bool operator==(const DatasetInfo&) const = default;
};

struct GenerationEntry {
    int generation = 0;
    /// Fitness of the best parent after selection.
    double best_fitness = 0.0;
    std::vector<double> parent_fitness;
    std::uint64_t support_count = 0;
    std::uint64_t new_evaluations = 0;
    /// Highest-accuracy mask evaluated so far in the run.
    FeatureMask best_mask;
    double best_accuracy = 0.0;
    int parent_depth = 0;

    bool operator==(const GenerationEntry&) const = default;
};

struct DistributionEntry {
    FeatureMask mask;
    std::uint64_t count = 0;
    double probability = 0.0;
    double accuracy = 0.0;

    bool operator==(const DistributionEntry&) const = default;
};

struct RunTotals {
    std::uint64_t cache_size = 0;
    double empirical_auc = 0.0;
    double predicted_auc = 0.0;
    std::uint64_t cumulative_evaluations = 0;

    bool operator==(const RunTotals&) const = default;
};

struct RunRecord {
    int format_version = run_record_version;
    EvolutionConfig evolution;
    EvaluatorSpec evaluator;
    DatasetInfo dataset;
    std::vector<GenerationEntry> generations;
    Circuit final_circuit;
    double final_fitness = 0.0;
    std::vector<DistributionEntry> final_distribution;
    RunTotals totals;

    bool operator==(const RunRecord&) const = default;
};

/// Canonical text: fixed key order, two-space indent, trailing newline.
/// Doubles are written in shortest round-trip form.
std::string serialize(const RunRecord& record);
RunRecord parse_run_record(const std::string& text);

RunRecord read_run_record(const std::string& path);
void write_run_record(const RunRecord& record, const std::string& path);

}  // namespace eqfs
