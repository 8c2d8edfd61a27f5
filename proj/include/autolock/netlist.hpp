#ifndef AUTOLOCK_NETLIST_HPP
#define AUTOLOCK_NETLIST_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "autolock/error.hpp"

namespace autolock {

enum class GateKind {
    Input,  // primary or key input; never appears on a gate line
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buff,
    Mux,  // inputs are (select, d0, d1)
};

constexpr int kGateKindCount = 10;

const char* kind_name(GateKind k);
/// Parses a .bench gate keyword; returns false for unknown kinds (incl. DFF).
bool kind_from_name(const std::string& s, GateKind& out);

/// Evaluates one gate over already-computed input values.
bool eval_gate(GateKind kind, const std::vector<std::uint8_t>& inputs);

struct Gate {
    std::string name;
    GateKind kind = GateKind::And;
    std::vector<std::string> inputs;

    bool operator==(const Gate&) const = default;
};

/// Ordered assignment name -> {0,1} over a declared input set.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(const std::vector<std::string>& names);

    void set(const std::string& name, bool value);
    bool get(const std::string& name) const;
    bool has(const std::string& name) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    /// Throws ValidationError unless the name set is exactly `declared`.
    void require_covers(const std::vector<std::string>& declared,
                        const std::string& what) const;

    bool operator==(const BitVector&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<std::uint8_t> bits_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Combinational gate-level netlist in the extended .bench dialect.
/// Immutable after construction; all operations on it are pure.
class Netlist {
public:
    Netlist() = default;
    Netlist(std::string name, std::vector<Gate> gates,
            std::vector<std::string> primary_inputs,
            std::vector<std::string> primary_outputs,
            std::vector<std::string> key_inputs);

    const std::string& name() const { return name_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<std::string>& primary_inputs() const { return primary_inputs_; }
    const std::vector<std::string>& primary_outputs() const { return primary_outputs_; }
    const std::vector<std::string>& key_inputs() const { return key_inputs_; }

    bool has_gate(const std::string& name) const;
    const Gate& gate(const std::string& name) const;
    bool is_input(const std::string& name) const;  // primary or key input
    bool is_key_input(const std::string& name) const;
    /// True for any declared signal: gate output, primary input, or key input.
    bool has_signal(const std::string& name) const;

    bool operator==(const Netlist& other) const;

private:
    std::string name_;
    std::vector<Gate> gates_;  // stored in file order
    std::vector<std::string> primary_inputs_;
    std::vector<std::string> primary_outputs_;
    std::vector<std::string> key_inputs_;
    std::unordered_map<std::string, std::size_t> gate_index_;
    std::unordered_set<std::string> input_set_;
    std::unordered_set<std::string> key_set_;
};

/// Parses the .bench dialect. Names matching keyinput<digits> become key
/// inputs. Throws ParseError (with line number) or ValidationError.
Netlist parse_bench(const std::string& text, const std::string& name = "netlist");

/// Canonical form: INPUT lines, key INPUT lines, OUTPUT lines, then gates in
/// stored order, one space after each comma. parse(write(n)) == n.
std::string write_bench(const Netlist& n);

/// Inputs first (lexicographic), then gates in dependency order with
/// lexicographic tie-breaks. Throws ValidationError naming a node on a cycle.
std::vector<std::string> topo_order(const Netlist& n);

/// Evaluates the netlist. pi must cover exactly the primary inputs and key
/// exactly the key inputs. MUX(s, d0, d1) = d0 when s=0, d1 when s=1.
BitVector simulate(const Netlist& n, const BitVector& pi,
                   const BitVector& key = BitVector{});

/// All nodes reachable from `from` via directed wire edges, excluding `from`.
std::unordered_set<std::string> reachable(const Netlist& n, const std::string& from);

}  // namespace autolock

#endif
