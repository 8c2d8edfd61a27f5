#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "autolock/io.hpp"
#include "support/test_circuits.hpp"

namespace fs = std::filesystem;
using namespace autolock;
using namespace autolock::testing;

namespace {

const std::string kCli = AUTOLOCK_CLI_PATH;
const std::string kC17 = std::string(AUTOLOCK_DATA_DIR) + "/c17.bench";

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("autolock_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli lock") {
    fs::path dir = fresh_dir("lock");
    std::string out = (dir / "a").string();
    REQUIRE(run("lock " + kC17 + " --key-length 4 --seed 7 --out " + out) == 0);

    Netlist locked = parse_bench(read_file(out + "/c17_locked.bench"), "c17_locked");
    CHECK(locked.gates().size() == 14);  // 6 + 2K
    CHECK(locked.key_inputs().size() == 4);
    CHECK(parse_key_file(read_file(out + "/c17.key")).size() == 4);

    // rerun with the same flags: byte-identical artifacts
    std::string out2 = (dir / "b").string();
    REQUIRE(run("lock " + kC17 + " --key-length 4 --seed 7 --out " + out2) == 0);
    CHECK(read_file(out + "/c17_locked.bench") == read_file(out2 + "/c17_locked.bench"));
    CHECK(read_file(out + "/c17.key") == read_file(out2 + "/c17.key"));
    CHECK(read_file(out + "/c17.genotype.json") ==
          read_file(out2 + "/c17.genotype.json"));

    // K=0 is a usage error
    CHECK(run("lock " + kC17 + " --key-length 0 --seed 7 --out " + out) == 2);
    // unparseable netlist
    CHECK(run("lock /nonexistent.bench --key-length 2 --seed 1 --out " + out) == 2);
}

TEST_CASE("cli attack") {
    fs::path dir = fresh_dir("attack");
    std::string out = dir.string();
    REQUIRE(run("lock " + kC17 + " --key-length 4 --seed 3 --out " + out) == 0);
    std::string locked = out + "/c17_locked.bench";
    std::string key = out + "/c17.key";

    REQUIRE(run("attack " + locked + " " + key + " --seed 5 --out " + out +
                "/report.json") == 0);
    auto j = ordered_json::parse(read_file(out + "/report.json"));
    CHECK(j["bits"].size() == 4);
    CHECK(j["accuracy"].get<double>() >= 0.0);
    CHECK(j["accuracy"].get<double>() <= 1.0);

    // determinism
    REQUIRE(run("attack " + locked + " " + key + " --seed 5 --out " + out +
                "/report2.json") == 0);
    CHECK(read_file(out + "/report.json") == read_file(out + "/report2.json"));

    // key with wrong bit count
    std::ofstream(out + "/short.key") << "keyinput0=1\n";
    CHECK(run("attack " + locked + " " + out + "/short.key --seed 5") == 2);
}

TEST_CASE("cli verify") {
    fs::path dir = fresh_dir("verify");
    std::string out = dir.string();
    REQUIRE(run("lock " + kC17 + " --key-length 4 --seed 9 --out " + out) == 0);
    std::string locked = out + "/c17_locked.bench";
    std::string key = out + "/c17.key";

    CHECK(run("verify " + kC17 + " " + locked + " " + key) == 0);

    // tamper one key bit: contract failure, exit 1
    std::string text = read_file(key);
    text[text.find('=') + 1] = text[text.find('=') + 1] == '0' ? '1' : '0';
    std::ofstream(out + "/bad.key") << text;
    CHECK(run("verify " + kC17 + " " + locked + " " + out + "/bad.key") == 1);

    // mismatched interfaces: usage error, exit 2
    std::ofstream(out + "/other.bench") << "INPUT(x)\nOUTPUT(y)\ny = NOT(x)\n";
    CHECK(run("verify " + out + "/other.bench " + locked + " " + key) == 2);

    // corruption reporting path
    CHECK(run("verify " + kC17 + " " + locked + " " + key + " --wrong-keys 3 --out " +
              out + "/corr.json") == 0);
    auto j = ordered_json::parse(read_file(out + "/corr.json"));
    CHECK(j["corruption"].size() == 3);
}

TEST_CASE("cli evolve") {
    fs::path dir = fresh_dir("evolve");
    std::string out1 = (dir / "r1").string();
    std::string out2 = (dir / "r2").string();
    std::string flags = " --key-length 3 --population 4 --generations 3 --elites 1 "
                        "--seed 42 --out ";
    REQUIRE(run("evolve " + kC17 + flags + out1) == 0);
    REQUIRE(run("evolve " + kC17 + flags + out2) == 0);

    // byte-identical artifacts across runs
    for (const char* f : {"/history.csv", "/run.json", "/c17_locked.bench", "/c17.key"})
        CHECK(read_file(out1 + f) == read_file(out2 + f));

    // history: header + <= G rows, non-decreasing best fitness
    std::istringstream hist(read_file(out1 + "/history.csv"));
    std::string line;
    std::getline(hist, line);
    CHECK(line == "generation,best_fitness,mean_fitness,best_accuracy");
    double prev = -1.0;
    int rows = 0;
    while (std::getline(hist, line)) {
        ++rows;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        double best = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(best >= prev);
        prev = best;
    }
    CHECK(rows >= 1);
    CHECK(rows <= 3);

    // the emitted winner verifies
    CHECK(run("verify " + kC17 + " " + out1 + "/c17_locked.bench " + out1 +
              "/c17.key") == 0);

    auto j = ordered_json::parse(read_file(out1 + "/run.json"));
    CHECK((j["termination"] == "generations-exhausted" ||
           j["termination"] == "target-reached"));
    CHECK(j["config"]["seed"] == 42);
}
