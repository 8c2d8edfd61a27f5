#ifndef AUTOLOCK_DMUX_HPP
#define AUTOLOCK_DMUX_HPP

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "autolock/netlist.hpp"
#include "autolock/rng.hpp"

namespace autolock {

/// A (consumer gate, input pin) location in the original netlist.
using Slot = std::pair<std::string, int>;

/// One MUX-pair insertion site: true wires f_i->(g_i,pin_i) and
/// f_j->(g_j,pin_j) plus the correct key bit k.
struct Gene {
    std::string f_i;
    std::string g_i;
    int pin_i = 0;
    std::string f_j;
    std::string g_j;
    int pin_j = 0;
    int k = 0;

    Slot slot_i() const { return {g_i, pin_i}; }
    Slot slot_j() const { return {g_j, pin_j}; }

    bool operator==(const Gene&) const = default;
};

/// Ordered gene list; gene at index b owns key input keyinput<b>.
struct Genotype {
    std::vector<Gene> genes;

    std::size_t key_length() const { return genes.size(); }
    bool operator==(const Genotype&) const = default;
};

struct LockedNetlist {
    Netlist netlist;
    Genotype genotype;
    BitVector correct_key;
    std::string origin_name;
};

struct GenotypeViolation {
    std::size_t gene_index;
    std::string reason;
};

struct ValidityReport {
    std::vector<GenotypeViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Name of the MUX replacing slot_i (side=0) / slot_j (side=1) of gene b.
std::string mux_gate_name(std::size_t gene_index, int side);
std::string key_input_name(std::size_t bit);

/// Samples one valid gene by rejection. `used_slots` are already-locked
/// (gate, pin) locations; `extra_edges` are cross edges of previously
/// accepted genes, included in the cycle check. Throws ExhaustionError
/// after `budget` rejected draws.
Gene sample_gene(const Netlist& n, const std::set<Slot>& used_slots,
                 const std::vector<std::pair<std::string, std::string>>& extra_edges,
                 Rng& rng, int budget = 100);

/// K pairwise slot-disjoint, jointly acyclic genes. Throws on K < 1 or
/// exhaustion (retry budget 100*K overall).
Genotype sample_random_genotype(const Netlist& n, std::size_t key_length, Rng& rng);

/// Checks gene invariants, slot disjointness, and joint acyclicity.
ValidityReport validate_genotype(const Netlist& n, const Genotype& g);

/// Replaces each violating gene (ascending index) with a fresh sample;
/// valid genes are untouched. Result passes validate_genotype.
Genotype repair_genotype(const Netlist& n, const Genotype& g, Rng& rng);

/// Materializes the genotype: one MUX pair and one key input per gene.
/// simulate(locked, pi, correct_key) equals simulate(original, pi) for all pi.
LockedNetlist apply_genotype(const Netlist& n, const Genotype& g);

/// The concatenation of gene k bits, keyed keyinput0..keyinput(K-1).
BitVector extract_key(const LockedNetlist& ln);

}  // namespace autolock

#endif
