#include "autolock/equiv.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "autolock/rng.hpp"

namespace autolock {

namespace {

/// Index-compiled evaluation plan; avoids per-vector name lookups when the
/// same netlist is simulated thousands of times.
class SimPlan {
public:
    explicit SimPlan(const Netlist& n) {
        std::unordered_map<std::string, int> slot;
        auto order = topo_order(n);
        values_.assign(order.size(), 0);
        int next = 0;
        for (const auto& name : order) slot[name] = next++;
        for (const auto& pi : n.primary_inputs()) pi_slots_.push_back(slot.at(pi));
        for (const auto& ki : n.key_inputs()) key_slots_.push_back(slot.at(ki));
        for (const auto& po : n.primary_outputs()) po_slots_.push_back(slot.at(po));
        for (const auto& name : order) {
            if (n.is_input(name)) continue;
            const Gate& g = n.gate(name);
            Step s;
            s.kind = g.kind;
            s.out = slot.at(name);
            for (const auto& in : g.inputs) s.in.push_back(slot.at(in));
            steps_.push_back(std::move(s));
        }
    }

    /// pi/key bits in declared order.
    std::vector<std::uint8_t> run(const std::vector<std::uint8_t>& pi,
                                  const std::vector<std::uint8_t>& key) {
        for (std::size_t i = 0; i < pi_slots_.size(); ++i) values_[pi_slots_[i]] = pi[i];
        for (std::size_t i = 0; i < key_slots_.size(); ++i) values_[key_slots_[i]] = key[i];
        std::vector<std::uint8_t> in;
        for (const auto& s : steps_) {
            in.clear();
            for (int idx : s.in) in.push_back(values_[idx]);
            values_[s.out] = eval_gate(s.kind, in) ? 1 : 0;
        }
        std::vector<std::uint8_t> out;
        out.reserve(po_slots_.size());
        for (int idx : po_slots_) out.push_back(values_[idx]);
        return out;
    }

private:
    struct Step {
        GateKind kind;
        int out;
        std::vector<int> in;
    };
    std::vector<int> pi_slots_, key_slots_, po_slots_;
    std::vector<Step> steps_;
    std::vector<std::uint8_t> values_;
};

std::vector<std::vector<std::uint8_t>> make_vectors(std::size_t n_inputs, EquivMode mode,
                                                    std::uint64_t seed,
                                                    std::size_t samples) {
    std::vector<std::vector<std::uint8_t>> vecs;
    if (mode == EquivMode::Exhaustive) {
        if (n_inputs > 24)
            throw ValidationError("exhaustive mode infeasible for " +
                                  std::to_string(n_inputs) + " inputs");
        std::size_t total = std::size_t{1} << n_inputs;
        for (std::size_t v = 0; v < total; ++v) {
            std::vector<std::uint8_t> bits(n_inputs);
            for (std::size_t i = 0; i < n_inputs; ++i) bits[i] = (v >> i) & 1u;
            vecs.push_back(std::move(bits));
        }
    } else {
        Rng rng(derive_seed(seed, "equiv-vectors"));
        for (std::size_t v = 0; v < samples; ++v) {
            std::vector<std::uint8_t> bits(n_inputs);
            for (auto& b : bits) b = rng.coin() ? 1 : 0;
            vecs.push_back(std::move(bits));
        }
    }
    return vecs;
}

std::vector<std::uint8_t> key_bits(const LockedNetlist& ln) {
    std::vector<std::uint8_t> bits;
    for (const auto& k : ln.netlist.key_inputs())
        bits.push_back(ln.correct_key.get(k) ? 1 : 0);
    return bits;
}

void require_same_interface(const Netlist& orig, const LockedNetlist& ln) {
    if (orig.primary_inputs() != ln.netlist.primary_inputs() ||
        orig.primary_outputs() != ln.netlist.primary_outputs())
        throw ValidationError("primary input/output interfaces differ");
}

}  // namespace

EquivReport check_equivalence(const Netlist& orig, const LockedNetlist& ln,
                              EquivMode mode, std::uint64_t seed, std::size_t samples) {
    require_same_interface(orig, ln);
    SimPlan plan_orig(orig);
    SimPlan plan_locked(ln.netlist);
    auto key = key_bits(ln);

    EquivReport report;
    report.mode = mode;
    for (const auto& vec : make_vectors(orig.primary_inputs().size(), mode, seed, samples)) {
        ++report.vectors_tested;
        if (plan_orig.run(vec, {}) != plan_locked.run(vec, key)) ++report.mismatches;
    }
    report.equivalent = report.mismatches == 0;
    return report;
}

EquivReport corruption_rate(const Netlist& orig, const LockedNetlist& ln,
                            std::size_t wrong_keys, Rng& rng, EquivMode mode,
                            std::uint64_t seed, std::size_t samples) {
    require_same_interface(orig, ln);
    std::size_t k = ln.netlist.key_inputs().size();
    if (k < 1) throw ValidationError("locked netlist has no key inputs");
    if (k < 64 && wrong_keys > (std::size_t{1} << k) - 1)
        throw ValidationError("cannot sample " + std::to_string(wrong_keys) +
                              " distinct wrong keys from a " + std::to_string(k) +
                              "-bit key space");

    auto correct = key_bits(ln);
    std::set<std::vector<std::uint8_t>> chosen;
    while (chosen.size() < wrong_keys) {
        std::vector<std::uint8_t> cand(k);
        for (auto& b : cand) b = rng.coin() ? 1 : 0;
        if (cand != correct) chosen.insert(std::move(cand));
    }

    SimPlan plan_orig(orig);
    SimPlan plan_locked(ln.netlist);
    auto vectors = make_vectors(orig.primary_inputs().size(), mode, seed, samples);

    EquivReport report;
    report.mode = mode;
    report.vectors_tested = vectors.size();
    std::vector<std::vector<std::uint8_t>> golden;
    golden.reserve(vectors.size());
    for (const auto& vec : vectors) golden.push_back(plan_orig.run(vec, {}));

    for (const auto& wrong : chosen) {
        std::size_t differing = 0;
        for (std::size_t i = 0; i < vectors.size(); ++i)
            if (plan_locked.run(vectors[i], wrong) != golden[i]) ++differing;
        report.corruption.push_back(static_cast<double>(differing) /
                                    static_cast<double>(vectors.size()));
    }
    // the equivalence fields describe the correct key, not the wrong ones
    for (std::size_t i = 0; i < vectors.size(); ++i)
        if (plan_locked.run(vectors[i], correct) != golden[i]) ++report.mismatches;
    report.equivalent = report.mismatches == 0;
    return report;
}

}  // namespace autolock
