#include "autolock/io.hpp"

#include <cstdio>
#include <sstream>

namespace autolock {

ordered_json genotype_to_json(const Genotype& g, const std::string& origin) {
    ordered_json genes = ordered_json::array();
    for (const auto& gene : g.genes) {
        genes.push_back({{"fi", gene.f_i},
                         {"gi", gene.g_i},
                         {"pini", gene.pin_i},
                         {"fj", gene.f_j},
                         {"gj", gene.g_j},
                         {"pinj", gene.pin_j},
                         {"k", gene.k}});
    }
    return ordered_json{{"origin", origin}, {"genes", std::move(genes)}};
}

Genotype genotype_from_json(const ordered_json& j) {
    Genotype g;
    for (const auto& e : j.at("genes")) {
        g.genes.push_back({e.at("fi").get<std::string>(), e.at("gi").get<std::string>(),
                           e.at("pini").get<int>(), e.at("fj").get<std::string>(),
                           e.at("gj").get<std::string>(), e.at("pinj").get<int>(),
                           e.at("k").get<int>()});
    }
    return g;
}

std::string key_file_text(const BitVector& key) {
    std::ostringstream out;
    for (std::size_t i = 0; i < key.size(); ++i) {
        std::string name = key_input_name(i);
        out << name << "=" << (key.get(name) ? 1 : 0) << "\n";
    }
    return out.str();
}

BitVector parse_key_file(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    std::vector<std::pair<std::string, bool>> entries;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        if (auto cr = line.find('\r'); cr != std::string::npos) line.erase(cr);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos || eq + 2 != line.size() ||
            (line[eq + 1] != '0' && line[eq + 1] != '1'))
            throw ParseError(lineno, "expected keyinput<i>=<0|1>");
        std::string name = line.substr(0, eq);
        if (name != key_input_name(entries.size()))
            throw ParseError(lineno, "expected key bit '" +
                                         key_input_name(entries.size()) + "', got '" +
                                         name + "'");
        entries.push_back({name, line[eq + 1] == '1'});
    }
    std::vector<std::string> names;
    for (const auto& [n, v] : entries) names.push_back(n);
    BitVector key(names);
    for (const auto& [n, v] : entries) key.set(n, v);
    return key;
}

std::string history_csv(const std::vector<GenerationStats>& history) {
    std::string out = "generation,best_fitness,mean_fitness,best_accuracy\n";
    char buf[128];
    for (const auto& h : history) {
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f\n", h.generation,
                      h.best_fitness, h.mean_fitness, h.best_accuracy);
        out += buf;
    }
    return out;
}

ordered_json attack_report_json(const AttackReport& report) {
    ordered_json bits = ordered_json::array();
    for (const auto& b : report.bits) {
        std::string pred = b.predicted < 0 ? "abstain" : (b.predicted ? "1" : "0");
        bits.push_back({{"bit", b.bit}, {"pred", pred}, {"margin", b.margin}});
    }
    return ordered_json{{"accuracy", report.accuracy},
                        {"precision", report.precision},
                        {"decided", report.decided},
                        {"bits", std::move(bits)}};
}

ordered_json equiv_report_json(const EquivReport& report) {
    return ordered_json{
        {"mode", report.mode == EquivMode::Exhaustive ? "exhaustive" : "sampled"},
        {"vectors", report.vectors_tested},
        {"mismatches", report.mismatches},
        {"equivalent", report.equivalent},
        {"corruption", report.corruption}};
}

ordered_json ga_run_json(const GARun& run, const GAConfig& cfg,
                         const std::string& origin) {
    return ordered_json{
        {"termination", termination_name(run.reason)},
        {"generations_run", run.history.size()},
        {"best_fitness", run.best.fitness},
        {"best_accuracy", run.best.attack_accuracy},
        {"best_genotype", genotype_to_json(run.best.genotype, origin)},
        {"config",
         {{"key_length", cfg.key_length},
          {"population", cfg.population},
          {"generations", cfg.generations},
          {"tournament", cfg.tournament},
          {"crossover_prob", cfg.crossover_prob},
          {"mutation_prob", cfg.effective_mutation_prob()},
          {"elites", cfg.elites},
          {"target_fitness", cfg.target_fitness},
          {"seed", cfg.seed},
          {"attack_seeds", cfg.attack_seeds},
          {"theta", cfg.theta},
          {"fitness_decided_only", cfg.fitness_decided_only}}}};
}

LockedNetlist reconstruct_locked(const Netlist& locked, const BitVector& key,
                                 const std::string& origin_name) {
    std::size_t k = locked.key_inputs().size();
    if (k == 0) throw ValidationError("netlist has no key inputs");
    key.require_covers(locked.key_inputs(), "key file");

    std::unordered_set<std::string> expected;
    for (std::size_t b = 0; b < k; ++b) {
        expected.insert(mux_gate_name(b, 0));
        expected.insert(mux_gate_name(b, 1));
    }

    // key MUX name -> unique consumer slot
    std::unordered_map<std::string, Slot> consumer;
    for (const auto& g : locked.gates()) {
        for (std::size_t pin = 0; pin < g.inputs.size(); ++pin) {
            const std::string& src = g.inputs[pin];
            if (!expected.count(src)) continue;
            if (consumer.count(src))
                throw ValidationError("key MUX '" + src + "' drives more than one pin");
            consumer[src] = {g.name, static_cast<int>(pin)};
        }
    }

    Genotype geno;
    for (std::size_t b = 0; b < k; ++b) {
        std::string kname = key_input_name(b);
        if (!key.has(kname))
            throw ValidationError("key file is missing bit '" + kname + "'");
        std::string m0 = mux_gate_name(b, 0), m1 = mux_gate_name(b, 1);
        for (const auto& m : {m0, m1}) {
            if (!locked.has_gate(m) || locked.gate(m).kind != GateKind::Mux ||
                locked.gate(m).inputs[0] != kname)
                throw ValidationError("locked netlist is missing key MUX '" + m + "'");
            if (!consumer.count(m))
                throw ValidationError("key MUX '" + m + "' drives nothing");
        }
        const auto& d0 = locked.gate(m0).inputs;
        const auto& d1 = locked.gate(m1).inputs;
        int bit = key.get(kname) ? 1 : 0;
        // apply_genotype ordering: select = k picks the true wire
        std::string f_i = bit == 0 ? d0[1] : d0[2];
        std::string f_j = bit == 0 ? d0[2] : d0[1];
        if ((bit == 0 && (d1[1] != f_j || d1[2] != f_i)) ||
            (bit == 1 && (d1[2] != f_j || d1[1] != f_i)))
            throw ValidationError("key MUX pair " + std::to_string(b) +
                                  " has inconsistent data inputs");
        auto [g_i, pin_i] = consumer.at(m0);
        auto [g_j, pin_j] = consumer.at(m1);
        geno.genes.push_back({f_i, g_i, pin_i, f_j, g_j, pin_j, bit});
    }

    BitVector correct(locked.key_inputs());
    for (const auto& name : locked.key_inputs()) correct.set(name, key.get(name));
    std::string origin = origin_name;
    if (origin.empty()) {
        origin = locked.name();
        constexpr std::string_view suffix = "_locked";
        if (origin.size() > suffix.size() &&
            origin.compare(origin.size() - suffix.size(), suffix.size(), suffix) == 0)
            origin.erase(origin.size() - suffix.size());
    }
    return LockedNetlist{locked, std::move(geno), std::move(correct), std::move(origin)};
}

}  // namespace autolock
