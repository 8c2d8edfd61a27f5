#ifndef AUTOLOCK_GA_HPP
#define AUTOLOCK_GA_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "autolock/attack.hpp"
#include "autolock/dmux.hpp"
#include "autolock/netlist.hpp"
#include "autolock/rng.hpp"

namespace autolock {

struct GAConfig {
    std::size_t key_length = 0;
    std::size_t population = 20;
    std::size_t generations = 30;
    std::size_t tournament = 2;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // < 0 means the default 1/K
    std::size_t elites = 2;
    double target_fitness = 1.0;  // 1.0 effectively disables the target stop
    std::uint64_t seed = 0;
    std::size_t attack_seeds = 1;
    double theta = 0.05;
    bool fitness_decided_only = false;  // score accuracy over decided bits only
    std::size_t jobs = 1;

    double effective_mutation_prob() const;
    void validate() const;
};

struct Individual {
    Genotype genotype;
    double fitness = 0.0;
    double attack_accuracy = 0.0;
    bool evaluated = false;
};

struct GenerationStats {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double best_accuracy = 0.0;
};

enum class Termination { GenerationsExhausted, TargetReached };

const char* termination_name(Termination t);

struct GARun {
    std::vector<GenerationStats> history;
    Individual best;
    Termination reason = Termination::GenerationsExhausted;
};

std::vector<Individual> init_population(const Netlist& n, const GAConfig& cfg);

/// Fitness = 1 - mean attack accuracy over cfg.attack_seeds seeded attack
/// runs; a pure function of the genotype for a fixed config.
Individual evaluate(Individual ind, const Netlist& n, const GAConfig& cfg);

/// Index of the tournament winner: t draws with replacement, highest
/// fitness, ties to the lower population index.
std::size_t tournament_select(const std::vector<Individual>& pop, std::size_t t,
                              Rng& rng);

/// One-point crossover with probability p_c, then repair. K=1 never crosses.
std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b,
                                        double p_c, const Netlist& n, Rng& rng);

/// Per gene with probability p_m: either flip k or resample the locality.
Genotype mutate(const Genotype& g, const Netlist& n, double p_m, Rng& rng);

/// The full generational loop with elitism; deterministic per (n, cfg).
GARun evolve(const Netlist& n, const GAConfig& cfg);

}  // namespace autolock

#endif
