#ifndef AUTOLOCK_IO_HPP
#define AUTOLOCK_IO_HPP

#include <string>

#include <json.hpp>

#include "autolock/attack.hpp"
#include "autolock/dmux.hpp"
#include "autolock/equiv.hpp"
#include "autolock/ga.hpp"

namespace autolock {

using ordered_json = nlohmann::ordered_json;

ordered_json genotype_to_json(const Genotype& g, const std::string& origin);
Genotype genotype_from_json(const ordered_json& j);

/// Key file: one `keyinput<i>=<0|1>` line per bit, ascending i.
std::string key_file_text(const BitVector& key);
BitVector parse_key_file(const std::string& text);

/// `generation,best_fitness,mean_fitness,best_accuracy`, 6-decimal fixed.
std::string history_csv(const std::vector<GenerationStats>& history);

ordered_json attack_report_json(const AttackReport& report);
ordered_json equiv_report_json(const EquivReport& report);
ordered_json ga_run_json(const GARun& run, const GAConfig& cfg, const std::string& origin);

/// Rebuilds the genotype view of a locked .bench file from its key MUX
/// naming convention plus the key file. Throws ValidationError when the
/// netlist does not look like apply_genotype output.
LockedNetlist reconstruct_locked(const Netlist& locked, const BitVector& key,
                                 const std::string& origin_name = "");

}  // namespace autolock

#endif
