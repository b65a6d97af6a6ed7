#include "eqfs/objective.hpp"

#include <algorithm>
#include <numeric>

#include "eqfs/error.hpp"

namespace eqfs {

void EvaluationLedger::begin_generation() {
    std::scoped_lock lock(mutex_);
    new_.push_back(0);
    support_.push_back(0);
}

double EvaluationLedger::accuracy(const FeatureMask& mask, Evaluator& evaluator) {
    std::promise<double> promise;
    std::shared_future<double> result;
    bool owner = false;
    {
        std::scoped_lock lock(mutex_);
        if (new_.empty()) throw ContractError("ledger used before begin_generation()");
        auto it = cache_.find(mask);
        if (it == cache_.end()) {
            result = promise.get_future().share();
            cache_.emplace(mask, result);
            ++new_.back();
            owner = true;
        } else {
            result = it->second;
        }
    }
    if (owner) {
        try {
            promise.set_value(evaluator(mask));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return result.get();
}

void EvaluationLedger::record_support(std::uint64_t support) {
    std::scoped_lock lock(mutex_);
    if (support_.empty()) throw ContractError("ledger used before begin_generation()");
    support_.back() += support;
}

std::size_t EvaluationLedger::cache_size() const {
    std::scoped_lock lock(mutex_);
    return cache_.size();
}

std::size_t EvaluationLedger::generations() const {
    std::scoped_lock lock(mutex_);
    return support_.size();
}

std::vector<std::uint64_t> EvaluationLedger::per_generation_new() const {
    std::scoped_lock lock(mutex_);
    return new_;
}

std::vector<std::uint64_t> EvaluationLedger::per_generation_support() const {
    std::scoped_lock lock(mutex_);
    return support_;
}

std::map<FeatureMask, double> EvaluationLedger::cache() const {
    std::scoped_lock lock(mutex_);
    std::map<FeatureMask, double> out;
    for (const auto& [mask, value] : cache_) {
        if (value.wait_for(std::chrono::seconds(0)) != std::future_status::ready) continue;
        try {
            out.emplace(mask, value.get());
        } catch (...) {
        }
    }
    return out;
}

double fitness(const SampledDistribution& dist, Evaluator& evaluator, EvaluationLedger& ledger) {
    if (dist.shots == 0 || dist.counts.empty()) throw ContractError("fitness of an empty distribution");
    double weighted = 0.0;
    double lo = 1.0, hi = 0.0;
    for (const auto& [mask, count] : dist.counts) {
        if (mask.width() != evaluator.width())
            throw ContractError("mask width " + std::to_string(mask.width()) + " differs from evaluator width " +
                                std::to_string(evaluator.width()));
        double f = 0.0;
        try {
            f = ledger.accuracy(mask, evaluator);
        } catch (const ContractError&) {
            throw;
        } catch (const std::exception& e) {
            throw FitnessEvaluationError(mask.to_string(), e.what());
        }
        weighted += static_cast<double>(count) * f;
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    ledger.record_support(dist.support());
    // Rounding can push the weighted mean an ulp outside the support range.
    return std::clamp(weighted / static_cast<double>(dist.shots), lo, hi);
}

double predicted_total_evaluations(std::uint64_t shots, std::uint64_t generations) {
    if (shots == 0 || generations == 0) throw ContractError("shots and generations must be positive");
    return static_cast<double>(shots) * static_cast<double>(generations) / 2.0;
}

AucSummary empirical_auc(const std::vector<std::uint64_t>& support, const std::vector<std::uint64_t>& misses) {
    if (support.empty()) throw InsufficientDataError("no generations recorded");
    AucSummary out;
    for (std::size_t k = 1; k < support.size(); ++k)
        out.support_auc += 0.5 * static_cast<double>(support[k - 1] + support[k]);
    out.cumulative_new = std::accumulate(misses.begin(), misses.end(), std::uint64_t{0});
    return out;
}

AucSummary empirical_auc(const EvaluationLedger& ledger) {
    return empirical_auc(ledger.per_generation_support(), ledger.per_generation_new());
}

}  // namespace eqfs
