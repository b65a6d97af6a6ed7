#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "eqfs/classifier.hpp"
#include "eqfs/objective.hpp"
#include "eqfs/random.hpp"
#include "eqfs/simulator.hpp"

namespace eqfs {

struct RunRecord;

struct MutationConfig {
    double p_insert = 0.5;
    double p_modify = 0.3;
    double p_delete = 0.1;
    double p_swap = 0.1;
    /// Standard deviation of the additive angle perturbation.
    double sigma_modify = std::numbers::pi / 10;

    bool operator==(const MutationConfig&) const = default;
};

void validate(const MutationConfig& config);

struct EvolutionConfig {
    int n = 0;
    int mu = 1;
    int lambda = 6;
    int generations = 12;
    std::uint64_t shots = 64;
    std::uint64_t seed = 0;
    MutationConfig mutation;

    bool operator==(const EvolutionConfig&) const = default;
};

void validate(const EvolutionConfig& config);

struct Individual {
    Circuit circuit;
    /// Frozen at evaluation time.
    double fitness = 0.0;
    SampledDistribution distribution;
    int birth_generation = 0;
};

enum class MutationKind { insert, modify, remove, swap };

MutationKind draw_mutation_kind(Rng& rng, const MutationConfig& config);

/// Applies `drawn` to the circuit, falling back to insert when it has nothing
/// to act on. Returns the kind actually performed.
MutationKind apply_mutation(Circuit& circuit, MutationKind drawn, Rng& rng, const MutationConfig& config);

/// One categorically drawn mutation.
Circuit mutate(Circuit circuit, Rng& rng, const MutationConfig& config);

std::vector<Circuit> spawn_offspring(const Individual& parent, int count, Rng& rng, const MutationConfig& config);

/// mu best of parents followed by offspring; ties go to the earlier birth
/// generation, then to position in that concatenation.
std::vector<Individual> select(const std::vector<Individual>& parents, const std::vector<Individual>& offspring, int mu);

struct EvolutionOptions {
    /// Worker threads for offspring evaluation; results do not depend on it.
    int threads = 1;
};

/// Runs generation 0 (empty circuit) then `generations` rounds of
/// spawn, simulate, sample, score, select. Fills the evolution parts of the
/// record; the caller supplies evaluator and dataset provenance.
RunRecord evolve(const EvolutionConfig& config, Evaluator& objective, const EvolutionOptions& options = {});

}  // namespace eqfs
