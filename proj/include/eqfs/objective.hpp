#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "eqfs/classifier.hpp"
#include "eqfs/feature_mask.hpp"
#include "eqfs/simulator.hpp"

namespace eqfs {

/// Mask -> accuracy cache plus the per-generation evaluation counters.
///
/// Two curves are kept per generation: `support` sums the distribution
/// support sizes handed to fitness() (the sum of dim Omega_i over the
/// evaluated individuals), `new_evaluations` counts cache misses, i.e.
/// classifier trainings actually performed. Lookups are safe from several
/// threads; a mask's evaluator call runs exactly once.
class EvaluationLedger {
public:
    /// Opens a counter slot; generation k is the k-th call.
    void begin_generation();

    double accuracy(const FeatureMask& mask, Evaluator& evaluator);
    void record_support(std::uint64_t support);

    std::size_t cache_size() const;
    std::size_t generations() const;
    std::vector<std::uint64_t> per_generation_new() const;
    std::vector<std::uint64_t> per_generation_support() const;
    /// Completed entries only, ordered by mask.
    std::map<FeatureMask, double> cache() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<FeatureMask, std::shared_future<double>> cache_;
    std::vector<std::uint64_t> new_;
    std::vector<std::uint64_t> support_;
};

/// Sampled objective: sum over the support of count/shots * f(mask).
double fitness(const SampledDistribution& dist, Evaluator& evaluator, EvaluationLedger& ledger);

/// Closed form of the integral of (m/K) k over [0, K], i.e. mK/2.
double predicted_total_evaluations(std::uint64_t shots, std::uint64_t generations);

struct AucSummary {
    /// Trapezoidal area under the support curve, generation index as abscissa.
    double support_auc = 0.0;
    std::uint64_t cumulative_new = 0;
};

AucSummary empirical_auc(const EvaluationLedger& ledger);
AucSummary empirical_auc(const std::vector<std::uint64_t>& support, const std::vector<std::uint64_t>& misses);

}  // namespace eqfs
