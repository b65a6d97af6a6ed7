#include "eqfs/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "eqfs/error.hpp"
#include "eqfs/run_record.hpp"

namespace eqfs {

void validate(const MutationConfig& c) {
    for (double p : {c.p_insert, c.p_modify, c.p_delete, c.p_swap})
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("mutation probabilities must lie in [0, 1]");
    if (std::abs(c.p_insert + c.p_modify + c.p_delete + c.p_swap - 1.0) > 1e-9)
        throw ContractError("mutation probabilities must sum to 1");
    if (!(c.sigma_modify >= 0.0) || !std::isfinite(c.sigma_modify))
        throw ContractError("sigma must be a finite non-negative angle");
}

void validate(const EvolutionConfig& c) {
    if (c.n < 1 || c.n > FeatureMask::max_width) throw ContractError("feature count out of range");
    if (c.mu < 1) throw ContractError("mu must be at least 1");
    if (c.lambda < 1) throw ContractError("lambda must be at least 1");
    if (c.generations < 1) throw ContractError("generations must be at least 1");
    if (c.shots < 1) throw ContractError("shots must be at least 1");
    validate(c.mutation);
}

MutationKind draw_mutation_kind(Rng& rng, const MutationConfig& c) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u < c.p_insert) return MutationKind::insert;
    if (u < c.p_insert + c.p_modify) return MutationKind::modify;
    if (u < c.p_insert + c.p_modify + c.p_delete) return MutationKind::remove;
    return MutationKind::swap;
}

namespace {

std::size_t uniform_index(Rng& rng, std::size_t size) {
    return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

void insert_gate(Circuit& circuit, Rng& rng) {
    const GateKind kind = all_gate_kinds[uniform_index(rng, std::size(all_gate_kinds))];
    const auto n = static_cast<std::size_t>(circuit.n);
    Gate gate;
    if (arity(kind) == 2 && n < 2) {
        // A single wire has no pair to entangle; draw a rotation instead.
        gate = Gate::single(all_gate_kinds[uniform_index(rng, 3)], 0, 0.0);
    } else if (arity(kind) == 2) {
        const auto a = uniform_index(rng, n);
        auto b = uniform_index(rng, n - 1);
        if (b >= a) ++b;
        gate = Gate::pair(kind, static_cast<int>(a), static_cast<int>(b), 0.0);
    } else {
        gate = Gate::single(kind, static_cast<int>(uniform_index(rng, n)), 0.0);
    }
    gate.angle = std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(rng);
    const auto position = uniform_index(rng, circuit.gates.size() + 1);
    circuit.gates.insert(circuit.gates.begin() + static_cast<std::ptrdiff_t>(position), gate);
}

}  // namespace

MutationKind apply_mutation(Circuit& circuit, MutationKind drawn, Rng& rng, const MutationConfig& config) {
    std::vector<std::size_t> pairs;
    if (drawn == MutationKind::swap)
        for (std::size_t i = 0; i < circuit.gates.size(); ++i)
            if (arity(circuit.gates[i].kind) == 2) pairs.push_back(i);

    const bool empty = circuit.gates.empty();
    if ((empty && (drawn == MutationKind::modify || drawn == MutationKind::remove)) ||
        (drawn == MutationKind::swap && pairs.empty()))
        drawn = MutationKind::insert;

    switch (drawn) {
        case MutationKind::insert: insert_gate(circuit, rng); break;
        case MutationKind::modify: {
            auto& gate = circuit.gates[uniform_index(rng, circuit.gates.size())];
            gate.angle += std::normal_distribution<double>(0.0, config.sigma_modify)(rng);
            break;
        }
        case MutationKind::remove:
            circuit.gates.erase(circuit.gates.begin() +
                                static_cast<std::ptrdiff_t>(uniform_index(rng, circuit.gates.size())));
            break;
        case MutationKind::swap: {
            auto& gate = circuit.gates[pairs[uniform_index(rng, pairs.size())]];
            std::swap(gate.qubits[0], gate.qubits[1]);
            break;
        }
    }
    return drawn;
}

Circuit mutate(Circuit circuit, Rng& rng, const MutationConfig& config) {
    const auto kind = draw_mutation_kind(rng, config);
    apply_mutation(circuit, kind, rng, config);
    return circuit;
}

std::vector<Circuit> spawn_offspring(const Individual& parent, int count, Rng& rng, const MutationConfig& config) {
    if (count < 1) throw ContractError("offspring count must be at least 1");
    std::vector<Circuit> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(mutate(parent.circuit, rng, config));
    return out;
}

std::vector<Individual> select(const std::vector<Individual>& parents, const std::vector<Individual>& offspring, int mu) {
    if (mu < 1) throw ContractError("mu must be at least 1");
    std::vector<const Individual*> pool;
    pool.reserve(parents.size() + offspring.size());
    for (const auto& p : parents) pool.push_back(&p);
    for (const auto& o : offspring) pool.push_back(&o);
    std::stable_sort(pool.begin(), pool.end(), [](const Individual* a, const Individual* b) {
        if (a->fitness != b->fitness) return a->fitness > b->fitness;
        return a->birth_generation < b->birth_generation;
    });
    std::vector<Individual> out;
    for (std::size_t i = 0; i < pool.size() && i < static_cast<std::size_t>(mu); ++i) out.push_back(*pool[i]);
    return out;
}

namespace {

struct BestSoFar {
    FeatureMask mask;
    double accuracy = -1.0;

    /// Scans in mask order; only a strictly better accuracy replaces the incumbent.
    void absorb(const SampledDistribution& dist, const std::map<FeatureMask, double>& cache) {
        for (const auto& [mask, count] : dist.counts) {
            const double a = cache.at(mask);
            if (a > accuracy) {
                accuracy = a;
                this->mask = mask;
            }
        }
    }
};

Individual evaluate_child(Circuit circuit, std::uint64_t shots, Rng& rng, int generation, Evaluator& objective,
                          EvaluationLedger& ledger) {
    Individual child;
    child.distribution = sample(simulate(circuit), shots, rng);
    child.fitness = fitness(child.distribution, objective, ledger);
    child.circuit = std::move(circuit);
    child.birth_generation = generation;
    return child;
}

GenerationEntry summarize(int generation, const std::vector<Individual>& parents, const EvaluationLedger& ledger,
                          const BestSoFar& best) {
    GenerationEntry e;
    e.generation = generation;
    e.best_fitness = parents.front().fitness;
    for (const auto& p : parents) e.parent_fitness.push_back(p.fitness);
    e.support_count = ledger.per_generation_support().back();
    e.new_evaluations = ledger.per_generation_new().back();
    e.best_mask = best.mask;
    e.best_accuracy = best.accuracy;
    e.parent_depth = depth(parents.front().circuit);
    return e;
}

}  // namespace

RunRecord evolve(const EvolutionConfig& config, Evaluator& objective, const EvolutionOptions& options) {
    validate(config);
    if (objective.width() != config.n)
        throw ContractError("evaluator width " + std::to_string(objective.width()) + " differs from n = " +
                            std::to_string(config.n));

    RunRecord record;
    record.evolution = config;
    EvaluationLedger ledger;
    BestSoFar best;

    ledger.begin_generation();
    Rng seed_stream = substream(config.seed, 0, 0);
    std::vector<Individual> parents{evaluate_child(Circuit{config.n, {}}, config.shots, seed_stream, 0, objective, ledger)};
    best.absorb(parents.front().distribution, ledger.cache());
    record.generations.push_back(summarize(0, parents, ledger, best));

    const auto lambda = static_cast<std::size_t>(config.lambda);
    const auto threads = static_cast<std::size_t>(std::clamp(options.threads, 1, config.lambda));
    for (int k = 1; k <= config.generations; ++k) {
        ledger.begin_generation();
        std::vector<Individual> offspring(lambda);
        std::vector<std::exception_ptr> errors(lambda);

        auto work = [&](std::size_t first) {
            for (std::size_t i = first; i < lambda; i += threads) {
                try {
                    Rng rng = substream(config.seed, static_cast<std::uint64_t>(k), i);
                    const auto& parent = parents[i % parents.size()];
                    offspring[i] = evaluate_child(mutate(parent.circuit, rng, config.mutation), config.shots, rng, k,
                                                  objective, ledger);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);

        const auto cache = ledger.cache();
        for (const auto& child : offspring) best.absorb(child.distribution, cache);
        parents = select(parents, offspring, config.mu);
        record.generations.push_back(summarize(k, parents, ledger, best));
    }

    const auto cache = ledger.cache();
    const auto& champion = parents.front();
    record.final_circuit = champion.circuit;
    record.final_fitness = champion.fitness;
    for (const auto& [mask, p] : quasi_probabilities(champion.distribution))
        record.final_distribution.push_back({mask, champion.distribution.counts.at(mask), p, cache.at(mask)});

    const auto auc = empirical_auc(ledger);
    record.totals.cache_size = ledger.cache_size();
    record.totals.empirical_auc = auc.support_auc;
    record.totals.cumulative_evaluations = auc.cumulative_new;
    record.totals.predicted_auc = predicted_total_evaluations(config.shots, static_cast<std::uint64_t>(config.generations));
    return record;
}

}  // namespace eqfs
