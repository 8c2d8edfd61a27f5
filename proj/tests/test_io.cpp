#include <doctest.h>

#include "autolock/io.hpp"
#include "support/test_circuits.hpp"

using namespace autolock;
using namespace autolock::testing;

TEST_CASE("genotype JSON round trip and schema") {
    Netlist c17 = load_c17();
    Rng rng(12);
    Genotype g = sample_random_genotype(c17, 3, rng);
    auto j = genotype_to_json(g, "c17");
    CHECK(j["origin"] == "c17");
    REQUIRE(j["genes"].size() == 3);
    for (const auto& e : j["genes"]) {
        CHECK(e.contains("fi"));
        CHECK(e.contains("gi"));
        CHECK(e.contains("pini"));
        CHECK(e.contains("fj"));
        CHECK(e.contains("gj"));
        CHECK(e.contains("pinj"));
        CHECK(e.contains("k"));
    }
    CHECK(genotype_from_json(j) == g);
}

TEST_CASE("key file format") {
    Netlist c17 = load_c17();
    Rng rng(12);
    Genotype g = sample_random_genotype(c17, 3, rng);
    g.genes[0].k = 1;
    g.genes[1].k = 0;
    g.genes[2].k = 1;
    BitVector key = extract_key(apply_genotype(c17, g));
    std::string text = key_file_text(key);
    CHECK(text == "keyinput0=1\nkeyinput1=0\nkeyinput2=1\n");
    CHECK(parse_key_file(text) == key);

    CHECK_THROWS_AS(parse_key_file("keyinput0=2\n"), ParseError);
    CHECK_THROWS_AS(parse_key_file("keyinput1=0\n"), ParseError);  // not dense from 0
    CHECK_THROWS_AS(parse_key_file("bogus\n"), ParseError);
}

TEST_CASE("history CSV format") {
    std::vector<GenerationStats> h = {{0, 0.5, 0.25, 0.5}, {1, 0.625, 0.3, 0.375}};
    CHECK(history_csv(h) ==
          "generation,best_fitness,mean_fitness,best_accuracy\n"
          "0,0.500000,0.250000,0.500000\n"
          "1,0.625000,0.300000,0.375000\n");
}

TEST_CASE("reconstruct_locked recovers the genotype from bench + key") {
    Netlist c17 = load_c17();
    Rng rng(44);
    LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, 4, rng));

    Netlist reparsed = parse_bench(write_bench(ln.netlist), ln.netlist.name());
    BitVector key = parse_key_file(key_file_text(ln.correct_key));
    LockedNetlist back = reconstruct_locked(reparsed, key, "c17");

    CHECK(back.genotype == ln.genotype);
    CHECK(back.correct_key == ln.correct_key);
    CHECK(attack_accuracy(back, 3) == attack_accuracy(ln, 3));
}

TEST_CASE("reconstruct_locked rejects inconsistent inputs") {
    Netlist c17 = load_c17();
    Rng rng(44);
    LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, 2, rng));

    // unlocked netlist
    CHECK_THROWS_AS(reconstruct_locked(c17, BitVector{}), ValidationError);

    // key with the wrong bit count
    BitVector short_key(std::vector<std::string>{"keyinput0"});
    CHECK_THROWS_AS(reconstruct_locked(ln.netlist, short_key), ValidationError);
}
