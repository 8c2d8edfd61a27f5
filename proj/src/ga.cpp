#include "autolock/ga.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace autolock {

double GAConfig::effective_mutation_prob() const {
    if (mutation_prob >= 0.0) return mutation_prob;
    return key_length > 0 ? 1.0 / static_cast<double>(key_length) : 0.0;
}

void GAConfig::validate() const {
    if (key_length < 1) throw ValidationError("key length must be at least 1");
    if (population < 2) throw ValidationError("population size must be at least 2");
    if (elites >= population)
        throw ValidationError("elite count must be smaller than the population");
    if (tournament < 1) throw ValidationError("tournament size must be at least 1");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw ValidationError("crossover probability must be in [0, 1]");
    double pm = effective_mutation_prob();
    if (pm < 0.0 || pm > 1.0)
        throw ValidationError("mutation probability must be in [0, 1]");
    if (generations < 1) throw ValidationError("generation count must be at least 1");
}

const char* termination_name(Termination t) {
    return t == Termination::TargetReached ? "target-reached" : "generations-exhausted";
}

std::vector<Individual> init_population(const Netlist& n, const GAConfig& cfg) {
    cfg.validate();
    std::vector<Individual> pop;
    pop.reserve(cfg.population);
    for (std::size_t i = 0; i < cfg.population; ++i) {
        Rng rng(derive_seed(cfg.seed, "init", i));
        pop.push_back({sample_random_genotype(n, cfg.key_length, rng)});
    }
    return pop;
}

Individual evaluate(Individual ind, const Netlist& n, const GAConfig& cfg) {
    if (ind.evaluated) return ind;
    LockedNetlist ln = apply_genotype(n, ind.genotype);
    double total = 0.0;
    for (std::size_t s = 0; s < cfg.attack_seeds; ++s) {
        AttackReport report = run_attack(ln, derive_seed(cfg.seed, "attack", s), cfg.theta);
        total += cfg.fitness_decided_only ? report.precision : report.accuracy;
    }
    ind.attack_accuracy = total / static_cast<double>(cfg.attack_seeds);
    ind.fitness = 1.0 - ind.attack_accuracy;
    ind.evaluated = true;
    return ind;
}

std::size_t tournament_select(const std::vector<Individual>& pop, std::size_t t,
                              Rng& rng) {
    if (pop.empty()) throw ValidationError("cannot select from an empty population");
    std::size_t best = pop.size();
    for (std::size_t d = 0; d < t; ++d) {
        std::size_t idx = rng.below(pop.size());
        if (best == pop.size() || pop[idx].fitness > pop[best].fitness ||
            (pop[idx].fitness == pop[best].fitness && idx < best))
            best = idx;
    }
    return best;
}

std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b,
                                        double p_c, const Netlist& n, Rng& rng) {
    std::size_t k = a.genes.size();
    if (k != b.genes.size())
        throw ValidationError("crossover requires genotypes of equal length");

    Genotype c1 = a, c2 = b;
    if (k > 1 && rng.real01() < p_c) {
        std::size_t cut = 1 + rng.below(k - 1);
        for (std::size_t i = cut; i < k; ++i) std::swap(c1.genes[i], c2.genes[i]);
    }
    c1 = repair_genotype(n, c1, rng);
    c2 = repair_genotype(n, c2, rng);
    return {std::move(c1), std::move(c2)};
}

Genotype mutate(const Genotype& g, const Netlist& n, double p_m, Rng& rng) {
    Genotype out = g;
    for (std::size_t i = 0; i < out.genes.size(); ++i) {
        if (rng.real01() >= p_m) continue;
        if (rng.coin()) {
            out.genes[i].k = 1 - out.genes[i].k;
        } else {
            std::set<Slot> used;
            std::vector<std::pair<std::string, std::string>> edges;
            for (std::size_t j = 0; j < out.genes.size(); ++j) {
                if (j == i) continue;
                used.insert(out.genes[j].slot_i());
                used.insert(out.genes[j].slot_j());
                edges.push_back({out.genes[j].f_j, out.genes[j].g_i});
                edges.push_back({out.genes[j].f_i, out.genes[j].g_j});
            }
            out.genes[i] = sample_gene(n, used, edges, rng,
                                       100 * static_cast<int>(out.genes.size()));
        }
    }
    return repair_genotype(n, out, rng);
}

namespace {

void evaluate_population(std::vector<Individual>& pop, const Netlist& n,
                         const GAConfig& cfg) {
    if (cfg.jobs <= 1) {
        for (auto& ind : pop) ind = evaluate(std::move(ind), n, cfg);
        return;
    }
    // evaluations are pure and indexed, so scheduling cannot change results
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= pop.size()) return;
            pop[i] = evaluate(std::move(pop[i]), n, cfg);
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < std::min(cfg.jobs, pop.size()); ++t)
        threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

std::vector<std::size_t> rank_by_fitness(const std::vector<Individual>& pop) {
    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pop[a].fitness > pop[b].fitness;
    });
    return order;
}

}  // namespace

GARun evolve(const Netlist& n, const GAConfig& cfg) {
    cfg.validate();
    GARun run;
    std::vector<Individual> pop = init_population(n, cfg);
    bool have_best = false;

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        evaluate_population(pop, n, cfg);

        auto order = rank_by_fitness(pop);
        const Individual& gen_best = pop[order.front()];
        double mean = 0.0;
        for (const auto& ind : pop) mean += ind.fitness;
        mean /= static_cast<double>(pop.size());
        run.history.push_back({gen, gen_best.fitness, mean, gen_best.attack_accuracy});

        if (!have_best || gen_best.fitness > run.best.fitness) {
            run.best = gen_best;
            have_best = true;
        }

        if (run.best.fitness >= cfg.target_fitness) {
            run.reason = Termination::TargetReached;
            return run;
        }
        if (gen + 1 == cfg.generations) break;

        Rng breed(derive_seed(cfg.seed, "breed", gen));
        std::vector<Individual> next;
        next.reserve(cfg.population);
        for (std::size_t e = 0; e < cfg.elites; ++e) next.push_back(pop[order[e]]);
        while (next.size() < cfg.population) {
            const Genotype& pa = pop[tournament_select(pop, cfg.tournament, breed)].genotype;
            const Genotype& pb = pop[tournament_select(pop, cfg.tournament, breed)].genotype;
            auto [c1, c2] = crossover(pa, pb, cfg.crossover_prob, n, breed);
            double pm = cfg.effective_mutation_prob();
            next.push_back({mutate(c1, n, pm, breed)});
            if (next.size() < cfg.population) next.push_back({mutate(c2, n, pm, breed)});
        }
        pop = std::move(next);
    }
    run.reason = Termination::GenerationsExhausted;
    return run;
}

}  // namespace autolock
