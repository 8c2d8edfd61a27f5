#include "autolock/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <sstream>

namespace autolock {

namespace {

struct KindEntry {
    GateKind kind;
    const char* name;
};

constexpr KindEntry kKinds[] = {
    {GateKind::Input, "INPUT"}, {GateKind::And, "AND"},   {GateKind::Nand, "NAND"},
    {GateKind::Or, "OR"},       {GateKind::Nor, "NOR"},   {GateKind::Xor, "XOR"},
    {GateKind::Xnor, "XNOR"},   {GateKind::Not, "NOT"},   {GateKind::Buff, "BUFF"},
    {GateKind::Mux, "MUX"},
};

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

bool is_key_input_name(const std::string& s) {
    constexpr std::string_view prefix = "keyinput";
    if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) return false;
    return std::all_of(s.begin() + prefix.size(), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

void check_arity(const Gate& g) {
    std::size_t n = g.inputs.size();
    switch (g.kind) {
        case GateKind::Not:
        case GateKind::Buff:
            if (n != 1)
                throw ValidationError("gate '" + g.name + "': " + kind_name(g.kind) +
                                      " takes exactly 1 input, got " + std::to_string(n));
            break;
        case GateKind::Mux:
            if (n != 3)
                throw ValidationError("gate '" + g.name +
                                      "': MUX takes exactly 3 inputs (select, d0, d1), got " +
                                      std::to_string(n));
            break;
        case GateKind::Input:
            throw ValidationError("gate '" + g.name + "': INPUT is not a gate kind");
        default:
            if (n < 2)
                throw ValidationError("gate '" + g.name + "': " + kind_name(g.kind) +
                                      " takes at least 2 inputs, got " + std::to_string(n));
    }
}

}  // namespace

bool eval_gate(GateKind kind, const std::vector<std::uint8_t>& in) {
    switch (kind) {
        case GateKind::And:
            return std::all_of(in.begin(), in.end(), [](std::uint8_t b) { return b != 0; });
        case GateKind::Nand:
            return !std::all_of(in.begin(), in.end(), [](std::uint8_t b) { return b != 0; });
        case GateKind::Or:
            return std::any_of(in.begin(), in.end(), [](std::uint8_t b) { return b != 0; });
        case GateKind::Nor:
            return !std::any_of(in.begin(), in.end(), [](std::uint8_t b) { return b != 0; });
        case GateKind::Xor: {
            int ones = static_cast<int>(std::count(in.begin(), in.end(), std::uint8_t{1}));
            return (ones & 1) != 0;
        }
        case GateKind::Xnor: {
            int ones = static_cast<int>(std::count(in.begin(), in.end(), std::uint8_t{1}));
            return (ones & 1) == 0;
        }
        case GateKind::Not:
            return in[0] == 0;
        case GateKind::Buff:
            return in[0] != 0;
        case GateKind::Mux:
            return in[0] ? in[2] != 0 : in[1] != 0;
        case GateKind::Input:
            break;
    }
    throw ValidationError("cannot evaluate INPUT as a gate");
}

const char* kind_name(GateKind k) {
    for (const auto& e : kKinds)
        if (e.kind == k) return e.name;
    return "?";
}

bool kind_from_name(const std::string& s, GateKind& out) {
    for (const auto& e : kKinds) {
        if (s == e.name && e.kind != GateKind::Input) {
            out = e.kind;
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// BitVector

BitVector::BitVector(const std::vector<std::string>& names) : names_(names) {
    bits_.assign(names_.size(), 0);
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], i).second)
            throw ValidationError("duplicate name in bit vector: " + names_[i]);
    }
}

void BitVector::set(const std::string& name, bool value) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError("bit vector has no entry '" + name + "'");
    bits_[it->second] = value ? 1 : 0;
}

bool BitVector::get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError("bit vector has no entry '" + name + "'");
    return bits_[it->second] != 0;
}

bool BitVector::has(const std::string& name) const { return index_.count(name) != 0; }

void BitVector::require_covers(const std::vector<std::string>& declared,
                               const std::string& what) const {
    if (names_.size() != declared.size())
        throw ValidationError(what + ": expected " + std::to_string(declared.size()) +
                              " assignments, got " + std::to_string(names_.size()));
    for (const auto& d : declared) {
        if (!has(d)) throw ValidationError(what + ": missing assignment for '" + d + "'");
    }
}

// ---------------------------------------------------------------------------
// Netlist

Netlist::Netlist(std::string name, std::vector<Gate> gates,
                 std::vector<std::string> primary_inputs,
                 std::vector<std::string> primary_outputs,
                 std::vector<std::string> key_inputs)
    : name_(std::move(name)),
      gates_(std::move(gates)),
      primary_inputs_(std::move(primary_inputs)),
      primary_outputs_(std::move(primary_outputs)),
      key_inputs_(std::move(key_inputs)) {
    for (const auto& pi : primary_inputs_) {
        if (!input_set_.insert(pi).second)
            throw ValidationError("duplicate input '" + pi + "'");
    }
    for (const auto& ki : key_inputs_) {
        if (!input_set_.insert(ki).second)
            throw ValidationError("duplicate input '" + ki + "'");
        key_set_.insert(ki);
    }
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        const Gate& g = gates_[i];
        if (input_set_.count(g.name) || !gate_index_.emplace(g.name, i).second)
            throw ValidationError("duplicate definition of '" + g.name + "'");
        check_arity(g);
    }
    for (const Gate& g : gates_) {
        for (const auto& in : g.inputs) {
            if (!has_signal(in))
                throw ValidationError("undefined signal '" + in + "' used by gate '" +
                                      g.name + "'");
        }
    }
    for (const auto& po : primary_outputs_) {
        if (!has_signal(po))
            throw ValidationError("primary output '" + po + "' names no gate or input");
    }
    topo_order(*this);  // rejects cycles
}

bool Netlist::has_gate(const std::string& name) const { return gate_index_.count(name) != 0; }

const Gate& Netlist::gate(const std::string& name) const {
    auto it = gate_index_.find(name);
    if (it == gate_index_.end()) throw ValidationError("no gate named '" + name + "'");
    return gates_[it->second];
}

bool Netlist::is_input(const std::string& name) const { return input_set_.count(name) != 0; }

bool Netlist::is_key_input(const std::string& name) const { return key_set_.count(name) != 0; }

bool Netlist::has_signal(const std::string& name) const {
    return is_input(name) || has_gate(name);
}

bool Netlist::operator==(const Netlist& other) const {
    return name_ == other.name_ && gates_ == other.gates_ &&
           primary_inputs_ == other.primary_inputs_ &&
           primary_outputs_ == other.primary_outputs_ && key_inputs_ == other.key_inputs_;
}

// ---------------------------------------------------------------------------
// Parsing / writing

Netlist parse_bench(const std::string& text, const std::string& name) {
    std::vector<Gate> gates;
    std::vector<std::string> pis, pos, keys;

    std::istringstream stream(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto pos_cr = line.find('\r'); pos_cr != std::string::npos) line.erase(pos_cr);
        if (auto pos_hash = line.find('#'); pos_hash != std::string::npos)
            line.erase(pos_hash);
        // strip whitespace
        std::string s;
        s.reserve(line.size());
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        if (s.empty()) continue;

        auto lpar = s.find('(');
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            // INPUT(name) or OUTPUT(name)
            if (lpar == std::string::npos || s.back() != ')')
                throw ParseError(lineno, "expected INPUT(..), OUTPUT(..) or an assignment");
            std::string head = s.substr(0, lpar);
            std::string arg = s.substr(lpar + 1, s.size() - lpar - 2);
            if (!valid_name(arg)) throw ParseError(lineno, "invalid signal name '" + arg + "'");
            if (head == "INPUT") {
                (is_key_input_name(arg) ? keys : pis).push_back(arg);
            } else if (head == "OUTPUT") {
                pos.push_back(arg);
            } else {
                throw ParseError(lineno, "unknown directive '" + head + "'");
            }
            continue;
        }

        // name = KIND(in1, in2, ...)
        std::string lhs = s.substr(0, eq);
        std::string rhs = s.substr(eq + 1);
        if (!valid_name(lhs)) throw ParseError(lineno, "invalid gate name '" + lhs + "'");
        lpar = rhs.find('(');
        if (lpar == std::string::npos || rhs.back() != ')')
            throw ParseError(lineno, "malformed gate expression");
        std::string kind_str = rhs.substr(0, lpar);
        GateKind kind;
        if (!kind_from_name(kind_str, kind)) {
            if (kind_str == "DFF")
                throw ParseError(lineno, "sequential element DFF is not supported");
            throw ParseError(lineno, "unknown gate kind '" + kind_str + "'");
        }
        std::string args = rhs.substr(lpar + 1, rhs.size() - lpar - 2);
        Gate g{lhs, kind, {}};
        std::size_t start = 0;
        while (start <= args.size() && !args.empty()) {
            auto comma = args.find(',', start);
            std::string tok = args.substr(start, comma == std::string::npos
                                                     ? std::string::npos
                                                     : comma - start);
            if (!valid_name(tok))
                throw ParseError(lineno, "invalid input name '" + tok + "'");
            g.inputs.push_back(tok);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (g.inputs.empty()) throw ParseError(lineno, "gate '" + lhs + "' has no inputs");
        gates.push_back(std::move(g));
    }

    return Netlist(name, std::move(gates), std::move(pis), std::move(pos), std::move(keys));
}

std::string write_bench(const Netlist& n) {
    std::ostringstream out;
    for (const auto& pi : n.primary_inputs()) out << "INPUT(" << pi << ")\n";
    for (const auto& ki : n.key_inputs()) out << "INPUT(" << ki << ")\n";
    for (const auto& po : n.primary_outputs()) out << "OUTPUT(" << po << ")\n";
    for (const auto& g : n.gates()) {
        out << g.name << " = " << kind_name(g.kind) << "(";
        for (std::size_t i = 0; i < g.inputs.size(); ++i) {
            if (i) out << ", ";
            out << g.inputs[i];
        }
        out << ")\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Graph operations

std::vector<std::string> topo_order(const Netlist& n) {
    std::vector<std::string> order;
    order.reserve(n.primary_inputs().size() + n.key_inputs().size() + n.gates().size());

    std::vector<std::string> inputs = n.primary_inputs();
    inputs.insert(inputs.end(), n.key_inputs().begin(), n.key_inputs().end());
    std::sort(inputs.begin(), inputs.end());
    order.insert(order.end(), inputs.begin(), inputs.end());

    // Kahn over gates only; input-fed dependencies are always satisfied.
    std::unordered_map<std::string, int> pending;
    std::unordered_map<std::string, std::vector<std::string>> consumers;
    for (const auto& g : n.gates()) {
        int deps = 0;
        for (const auto& in : g.inputs) {
            if (n.has_gate(in)) {
                ++deps;
                consumers[in].push_back(g.name);
            }
        }
        pending[g.name] = deps;
    }

    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& g : n.gates())
        if (pending[g.name] == 0) ready.push(g.name);

    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::string name = ready.top();
        ready.pop();
        order.push_back(name);
        ++emitted;
        auto it = consumers.find(name);
        if (it == consumers.end()) continue;
        for (const auto& c : it->second)
            if (--pending[c] == 0) ready.push(c);
    }
    if (emitted != n.gates().size()) {
        // name one gate left on a cycle (lexicographically smallest for determinism)
        std::string witness;
        for (const auto& [name, deps] : pending)
            if (deps > 0 && (witness.empty() || name < witness)) witness = name;
        throw ValidationError("combinational cycle through gate '" + witness + "'");
    }
    return order;
}

BitVector simulate(const Netlist& n, const BitVector& pi, const BitVector& key) {
    pi.require_covers(n.primary_inputs(), "primary inputs");
    key.require_covers(n.key_inputs(), "key inputs");

    std::unordered_map<std::string, std::uint8_t> value;
    for (const auto& name : n.primary_inputs()) value[name] = pi.get(name) ? 1 : 0;
    for (const auto& name : n.key_inputs()) value[name] = key.get(name) ? 1 : 0;

    for (const auto& name : topo_order(n)) {
        if (n.is_input(name)) continue;
        const Gate& g = n.gate(name);
        std::vector<std::uint8_t> in;
        in.reserve(g.inputs.size());
        for (const auto& src : g.inputs) in.push_back(value.at(src));
        value[name] = eval_gate(g.kind, in) ? 1 : 0;
    }

    BitVector out(n.primary_outputs());
    for (const auto& po : n.primary_outputs()) out.set(po, value.at(po) != 0);
    return out;
}

std::unordered_set<std::string> reachable(const Netlist& n, const std::string& from) {
    if (!n.has_signal(from)) throw ValidationError("unknown node '" + from + "'");

    std::unordered_map<std::string, std::vector<std::string>> fanout;
    for (const auto& g : n.gates())
        for (const auto& in : g.inputs) fanout[in].push_back(g.name);

    std::unordered_set<std::string> seen;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        auto it = fanout.find(cur);
        if (it == fanout.end()) continue;
        for (const auto& next : it->second)
            if (seen.insert(next).second) stack.push_back(next);
    }
    seen.erase(from);
    return seen;
}

}  // namespace autolock
