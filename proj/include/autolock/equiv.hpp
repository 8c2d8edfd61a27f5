#ifndef AUTOLOCK_EQUIV_HPP
#define AUTOLOCK_EQUIV_HPP

#include <cstdint>
#include <vector>

#include "autolock/dmux.hpp"
#include "autolock/netlist.hpp"

namespace autolock {

enum class EquivMode { Exhaustive, Sampled };

struct EquivReport {
    EquivMode mode = EquivMode::Exhaustive;
    std::size_t vectors_tested = 0;
    std::size_t mismatches = 0;
    bool equivalent = false;
    std::vector<double> corruption;  // per sampled wrong key, fraction of
                                     // vectors with >=1 differing output
};

/// Compares simulate(orig, pi) against simulate(ln, pi, correct_key).
/// Exhaustive mode walks all 2^|PI| vectors; sampled mode draws `samples`
/// vectors from a seed-derived stream.
EquivReport check_equivalence(const Netlist& orig, const LockedNetlist& ln,
                              EquivMode mode, std::uint64_t seed = 0,
                              std::size_t samples = 1000);

/// Samples `wrong_keys` distinct keys != correct key and reports the
/// per-key output-corruption fraction. Zero corruption is reported, never
/// treated as an error: a wrong key can be functionally benign.
EquivReport corruption_rate(const Netlist& orig, const LockedNetlist& ln,
                            std::size_t wrong_keys, Rng& rng, EquivMode mode,
                            std::uint64_t seed = 0, std::size_t samples = 1000);

}  // namespace autolock

#endif
