#include "autolock/dmux.hpp"

#include <algorithm>
#include <queue>

namespace autolock {

namespace {

/// True iff the original wire graph plus `extra` directed edges is acyclic.
/// Edges out of primary inputs can never close a cycle, so only gate->gate
/// dependencies are counted.
bool acyclic_with(const Netlist& n,
                  const std::vector<std::pair<std::string, std::string>>& extra) {
    std::unordered_map<std::string, int> pending;
    std::unordered_map<std::string, std::vector<std::string>> consumers;
    for (const auto& g : n.gates()) pending[g.name] = 0;

    auto add_edge = [&](const std::string& u, const std::string& v) {
        if (!n.has_gate(u)) return;  // input-driven, never on a cycle
        consumers[u].push_back(v);
        ++pending[v];
    };
    for (const auto& g : n.gates())
        for (const auto& in : g.inputs) add_edge(in, g.name);
    for (const auto& [u, v] : extra) add_edge(u, v);

    std::vector<std::string> ready;
    for (const auto& [name, deps] : pending)
        if (deps == 0) ready.push_back(name);
    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::string cur = ready.back();
        ready.pop_back();
        ++emitted;
        auto it = consumers.find(cur);
        if (it == consumers.end()) continue;
        for (const auto& v : it->second)
            if (--pending[v] == 0) ready.push_back(v);
    }
    return emitted == n.gates().size();
}

/// Static (order-independent) gene checks; returns empty string when fine.
std::string check_gene_static(const Netlist& n, const Gene& gene) {
    for (const auto& [g_name, pin, f_name] :
         {std::tuple{gene.g_i, gene.pin_i, gene.f_i},
          std::tuple{gene.g_j, gene.pin_j, gene.f_j}}) {
        if (!n.has_gate(g_name)) return "consumer '" + g_name + "' is not a gate";
        const Gate& g = n.gate(g_name);
        if (pin < 0 || pin >= static_cast<int>(g.inputs.size()))
            return "pin " + std::to_string(pin) + " out of range for gate '" + g_name + "'";
        if (g.inputs[pin] != f_name)
            return "'" + f_name + "' does not drive pin " + std::to_string(pin) +
                   " of '" + g_name + "'";
        if (n.is_key_input(f_name)) return "driver '" + f_name + "' is a key input";
    }
    if (gene.f_i == gene.f_j) return "f_i and f_j are the same wire";
    if (gene.slot_i() == gene.slot_j()) return "both ends lock the same (gate, pin) slot";
    if (gene.k != 0 && gene.k != 1) return "key bit outside {0,1}";
    return {};
}

std::vector<std::pair<std::string, std::string>> cross_edges(const Gene& g) {
    return {{g.f_j, g.g_i}, {g.f_i, g.g_j}};
}

}  // namespace

std::string mux_gate_name(std::size_t gene_index, int side) {
    return "mux_" + std::to_string(gene_index) + "_" + std::to_string(side);
}

std::string key_input_name(std::size_t bit) { return "keyinput" + std::to_string(bit); }

Gene sample_gene(const Netlist& n, const std::set<Slot>& used_slots,
                 const std::vector<std::pair<std::string, std::string>>& extra_edges,
                 Rng& rng, int budget) {
    if (n.gates().empty()) throw ExhaustionError("netlist has no gates to lock");
    const auto& gates = n.gates();

    for (int attempt = 0; attempt < budget; ++attempt) {
        const Gate& gi = gates[rng.below(gates.size())];
        int pin_i = static_cast<int>(rng.below(gi.inputs.size()));
        const Gate& gj = gates[rng.below(gates.size())];
        int pin_j = static_cast<int>(rng.below(gj.inputs.size()));

        Gene gene{gi.inputs[pin_i], gi.name, pin_i, gj.inputs[pin_j], gj.name, pin_j,
                  rng.coin() ? 1 : 0};
        if (!check_gene_static(n, gene).empty()) continue;
        if (used_slots.count(gene.slot_i()) || used_slots.count(gene.slot_j())) continue;

        auto edges = extra_edges;
        auto cross = cross_edges(gene);
        edges.insert(edges.end(), cross.begin(), cross.end());
        if (!acyclic_with(n, edges)) continue;
        return gene;
    }
    throw ExhaustionError("no valid MUX-pair location found within " +
                          std::to_string(budget) +
                          " draws (circuit too small or key too long)");
}

Genotype sample_random_genotype(const Netlist& n, std::size_t key_length, Rng& rng) {
    if (key_length < 1) throw ValidationError("key length must be at least 1");
    Genotype geno;
    std::set<Slot> used;
    std::vector<std::pair<std::string, std::string>> edges;
    int budget = 100 * static_cast<int>(key_length);
    for (std::size_t b = 0; b < key_length; ++b) {
        Gene gene = sample_gene(n, used, edges, rng, budget);
        used.insert(gene.slot_i());
        used.insert(gene.slot_j());
        auto cross = cross_edges(gene);
        edges.insert(edges.end(), cross.begin(), cross.end());
        geno.genes.push_back(std::move(gene));
    }
    return geno;
}

ValidityReport validate_genotype(const Netlist& n, const Genotype& g) {
    ValidityReport report;
    if (g.genes.empty()) {
        report.violations.push_back({0, "genotype is empty (K must be >= 1)"});
        return report;
    }

    std::set<Slot> used;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t b = 0; b < g.genes.size(); ++b) {
        const Gene& gene = g.genes[b];
        std::string reason = check_gene_static(n, gene);
        if (reason.empty()) {
            if (used.count(gene.slot_i()) || used.count(gene.slot_j()))
                reason = "slot already locked by an earlier gene";
        }
        if (reason.empty()) {
            auto candidate = edges;
            auto cross = cross_edges(gene);
            candidate.insert(candidate.end(), cross.begin(), cross.end());
            if (!acyclic_with(n, candidate))
                reason = "cross connection would create a combinational cycle";
            else
                edges = std::move(candidate);
        }
        if (reason.empty()) {
            used.insert(gene.slot_i());
            used.insert(gene.slot_j());
        } else {
            report.violations.push_back({b, std::move(reason)});
        }
    }
    return report;
}

Genotype repair_genotype(const Netlist& n, const Genotype& g, Rng& rng) {
    ValidityReport report = validate_genotype(n, g);
    if (report.ok()) return g;

    std::vector<bool> bad(g.genes.size(), false);
    for (const auto& v : report.violations) bad[v.gene_index] = true;

    Genotype repaired = g;
    std::set<Slot> used;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t b = 0; b < g.genes.size(); ++b) {
        if (bad[b]) continue;
        used.insert(g.genes[b].slot_i());
        used.insert(g.genes[b].slot_j());
        auto cross = cross_edges(g.genes[b]);
        edges.insert(edges.end(), cross.begin(), cross.end());
    }
    int budget = 100 * std::max<int>(1, static_cast<int>(g.genes.size()));
    for (std::size_t b = 0; b < g.genes.size(); ++b) {
        if (!bad[b]) continue;
        Gene fresh = sample_gene(n, used, edges, rng, budget);
        used.insert(fresh.slot_i());
        used.insert(fresh.slot_j());
        auto cross = cross_edges(fresh);
        edges.insert(edges.end(), cross.begin(), cross.end());
        repaired.genes[b] = std::move(fresh);
    }
    return repaired;
}

LockedNetlist apply_genotype(const Netlist& n, const Genotype& g) {
    ValidityReport report = validate_genotype(n, g);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw ValidationError("invalid genotype: gene " + std::to_string(v.gene_index) +
                              ": " + v.reason);
    }
    if (!n.key_inputs().empty())
        throw ValidationError("netlist '" + n.name() + "' is already locked");

    std::vector<Gate> gates = n.gates();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < gates.size(); ++i) index[gates[i].name] = i;

    std::vector<std::string> keys;
    BitVector correct_key([&] {
        std::vector<std::string> names;
        for (std::size_t b = 0; b < g.genes.size(); ++b)
            names.push_back(key_input_name(b));
        return names;
    }());

    std::vector<Gate> muxes;
    for (std::size_t b = 0; b < g.genes.size(); ++b) {
        const Gene& gene = g.genes[b];
        std::string key = key_input_name(b);
        std::string m0 = mux_gate_name(b, 0);
        std::string m1 = mux_gate_name(b, 1);
        for (const auto& fresh : {key, m0, m1}) {
            if (n.has_signal(fresh))
                throw ValidationError("name '" + fresh +
                                      "' already exists in the original netlist");
        }
        // select = k must restore the true wires through both MUXes
        if (gene.k == 0) {
            muxes.push_back({m0, GateKind::Mux, {key, gene.f_i, gene.f_j}});
            muxes.push_back({m1, GateKind::Mux, {key, gene.f_j, gene.f_i}});
        } else {
            muxes.push_back({m0, GateKind::Mux, {key, gene.f_j, gene.f_i}});
            muxes.push_back({m1, GateKind::Mux, {key, gene.f_i, gene.f_j}});
        }
        gates[index.at(gene.g_i)].inputs[gene.pin_i] = m0;
        gates[index.at(gene.g_j)].inputs[gene.pin_j] = m1;
        keys.push_back(key);
        correct_key.set(key, gene.k != 0);
    }
    gates.insert(gates.end(), muxes.begin(), muxes.end());

    Netlist locked(n.name() + "_locked", std::move(gates), n.primary_inputs(),
                   n.primary_outputs(), std::move(keys));
    return LockedNetlist{std::move(locked), g, std::move(correct_key), n.name()};
}

BitVector extract_key(const LockedNetlist& ln) { return ln.correct_key; }

}  // namespace autolock
