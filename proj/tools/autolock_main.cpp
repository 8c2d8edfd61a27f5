// autolock: GA-driven MUX locking of .bench netlists with a built-in
// link-prediction key-recovery attack used as the fitness oracle.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "autolock/equiv.hpp"
#include "autolock/ga.hpp"
#include "autolock/io.hpp"

namespace fs = std::filesystem;
using namespace autolock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitContract = 1;  // non-equivalence
constexpr int kExitUsage = 2;     // usage / IO / parse errors

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

std::string stem_of(const fs::path& path) { return path.stem().string(); }

Netlist load_netlist(const fs::path& path) {
    return parse_bench(read_file(path), stem_of(path));
}

EquivMode pick_mode(const Netlist& n, const std::string& requested) {
    if (requested == "exhaustive") return EquivMode::Exhaustive;
    if (requested == "sampled") return EquivMode::Sampled;
    // auto: exhaustive is required (and cheap) up to 16 primary inputs
    return n.primary_inputs().size() <= 16 ? EquivMode::Exhaustive : EquivMode::Sampled;
}

void emit_locked(const fs::path& out_dir, const std::string& origin,
                 const LockedNetlist& ln) {
    write_file(out_dir / (origin + "_locked.bench"), write_bench(ln.netlist));
    write_file(out_dir / (origin + ".key"), key_file_text(ln.correct_key));
    write_file(out_dir / (origin + ".genotype.json"),
               genotype_to_json(ln.genotype, origin).dump(2) + "\n");
}

int cmd_lock(const fs::path& netlist_path, std::size_t key_length, std::uint64_t seed,
             const fs::path& out_dir) {
    Netlist n = load_netlist(netlist_path);
    Rng rng(derive_seed(seed, "lock"));
    Genotype geno = sample_random_genotype(n, key_length, rng);
    LockedNetlist ln = apply_genotype(n, geno);
    emit_locked(out_dir, n.name(), ln);
    std::cout << "locked " << n.name() << ": " << n.gates().size() << " -> "
              << ln.netlist.gates().size() << " gates, " << key_length
              << " key inputs\n";
    return kExitOk;
}

int cmd_attack(const fs::path& locked_path, const fs::path& key_path,
               std::uint64_t seed, double theta, const fs::path& out_path) {
    Netlist locked = load_netlist(locked_path);
    BitVector key = parse_key_file(read_file(key_path));
    LockedNetlist ln = reconstruct_locked(locked, key);
    AttackReport report = run_attack(ln, seed, theta);
    std::string text = attack_report_json(report).dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    std::cout << "accuracy " << report.accuracy << ", precision " << report.precision
              << ", decided " << report.decided << "/" << report.bits.size() << "\n";
    return kExitOk;
}

int cmd_evolve(const fs::path& netlist_path, GAConfig cfg, const fs::path& out_dir,
               const std::string& equiv_mode, std::size_t equiv_samples) {
    Netlist n = load_netlist(netlist_path);
    GARun run = evolve(n, cfg);
    LockedNetlist best = apply_genotype(n, run.best.genotype);

    EquivReport equiv = check_equivalence(n, best, pick_mode(n, equiv_mode),
                                          derive_seed(cfg.seed, "equiv"), equiv_samples);
    if (!equiv.equivalent) {
        std::cerr << "refusing to emit: winner fails equivalence ("
                  << equiv.mismatches << "/" << equiv.vectors_tested
                  << " vectors mismatch)\n";
        return kExitContract;
    }

    emit_locked(out_dir, n.name(), best);
    write_file(out_dir / "history.csv", history_csv(run.history));
    write_file(out_dir / "run.json", ga_run_json(run, cfg, n.name()).dump(2) + "\n");
    std::cout << "evolve " << n.name() << ": " << termination_name(run.reason)
              << " after " << run.history.size() << " generation(s), best fitness "
              << run.best.fitness << " (attack accuracy " << run.best.attack_accuracy
              << ")\n";
    return kExitOk;
}

int cmd_verify(const fs::path& orig_path, const fs::path& locked_path,
               const fs::path& key_path, const std::string& mode, std::uint64_t seed,
               std::size_t samples, std::size_t wrong_keys, const fs::path& out_path) {
    Netlist orig = load_netlist(orig_path);
    Netlist locked = load_netlist(locked_path);
    BitVector key = parse_key_file(read_file(key_path));
    LockedNetlist ln = reconstruct_locked(locked, key, orig.name());

    EquivReport report;
    EquivMode m = pick_mode(orig, mode);
    if (wrong_keys > 0) {
        Rng rng(derive_seed(seed, "wrong-keys"));
        report = corruption_rate(orig, ln, wrong_keys, rng, m, seed, samples);
    } else {
        report = check_equivalence(orig, ln, m, seed, samples);
    }
    std::string text = equiv_report_json(report).dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return report.equivalent ? kExitOk : kExitContract;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AutoLock: evolutionary MUX-based logic locking"};
    app.require_subcommand(1);

    // lock
    auto* lock = app.add_subcommand("lock", "Lock a netlist with a random genotype");
    fs::path lock_in, lock_out = ".";
    std::size_t lock_k = 0;
    std::uint64_t lock_seed = 0;
    lock->add_option("netlist", lock_in, "original .bench file")->required();
    lock->add_option("--key-length,-k", lock_k, "key length K (>= 1)")->required();
    lock->add_option("--seed", lock_seed, "random seed")->required();
    lock->add_option("--out,-o", lock_out, "output directory");

    // attack
    auto* attack = app.add_subcommand("attack", "Run the link-prediction key attack");
    fs::path atk_bench, atk_key, atk_out;
    std::uint64_t atk_seed = 0;
    double atk_theta = 0.05;
    attack->add_option("locked", atk_bench, "locked .bench file")->required();
    attack->add_option("key", atk_key, "key file (ground truth for scoring)")->required();
    attack->add_option("--seed", atk_seed, "random seed")->required();
    attack->add_option("--theta", atk_theta, "abstain threshold");
    attack->add_option("--out,-o", atk_out, "report path (default: stdout)");

    // evolve
    auto* evo = app.add_subcommand("evolve", "Evolve a locking against the attack");
    fs::path evo_in, evo_out = ".";
    GAConfig cfg;
    std::string evo_mode = "auto";
    std::size_t evo_samples = 1000;
    evo->add_option("netlist", evo_in, "original .bench file")->required();
    evo->add_option("--key-length,-k", cfg.key_length, "key length K")->required();
    evo->add_option("--seed", cfg.seed, "master seed")->required();
    evo->add_option("--population,-N", cfg.population, "population size");
    evo->add_option("--generations,-G", cfg.generations, "max generations");
    evo->add_option("--tournament", cfg.tournament, "tournament size");
    evo->add_option("--crossover", cfg.crossover_prob, "crossover probability");
    evo->add_option("--mutation", cfg.mutation_prob, "per-gene mutation probability");
    evo->add_option("--elites", cfg.elites, "elite count");
    evo->add_option("--target-fitness", cfg.target_fitness, "early-stop fitness");
    evo->add_option("--attack-seeds", cfg.attack_seeds, "attack runs per evaluation");
    evo->add_option("--theta", cfg.theta, "attack abstain threshold");
    evo->add_flag("--fitness-decided-only", cfg.fitness_decided_only,
                  "score accuracy over decided key bits only");
    evo->add_option("--jobs,-j", cfg.jobs, "parallel fitness evaluations");
    evo->add_option("--equiv-mode", evo_mode, "auto|exhaustive|sampled")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    evo->add_option("--equiv-samples", evo_samples, "vectors in sampled mode");
    evo->add_option("--out,-o", evo_out, "output directory");

    // verify
    auto* verify = app.add_subcommand("verify", "Check correct-key equivalence");
    fs::path ver_orig, ver_locked, ver_key, ver_out;
    std::string ver_mode = "auto";
    std::uint64_t ver_seed = 0;
    std::size_t ver_samples = 1000, ver_wrong = 0;
    verify->add_option("original", ver_orig, "original .bench file")->required();
    verify->add_option("locked", ver_locked, "locked .bench file")->required();
    verify->add_option("key", ver_key, "key file")->required();
    verify->add_option("--mode", ver_mode, "auto|exhaustive|sampled")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    verify->add_option("--seed", ver_seed, "seed for sampled vectors");
    verify->add_option("--samples", ver_samples, "vectors in sampled mode");
    verify->add_option("--wrong-keys", ver_wrong, "also report corruption of N wrong keys");
    verify->add_option("--out,-o", ver_out, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (lock->parsed()) return cmd_lock(lock_in, lock_k, lock_seed, lock_out);
        if (attack->parsed())
            return cmd_attack(atk_bench, atk_key, atk_seed, atk_theta, atk_out);
        if (evo->parsed()) return cmd_evolve(evo_in, cfg, evo_out, evo_mode, evo_samples);
        if (verify->parsed())
            return cmd_verify(ver_orig, ver_locked, ver_key, ver_mode, ver_seed,
                              ver_samples, ver_wrong, ver_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
