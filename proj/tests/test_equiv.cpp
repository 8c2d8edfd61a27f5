#include <doctest.h>

#include <numeric>

#include "autolock/equiv.hpp"
#include "support/test_circuits.hpp"

using namespace autolock;
using namespace autolock::testing;

TEST_CASE("TINY locking is exhaustively equivalent under the correct key") {
    Netlist tiny = tiny_netlist();
    LockedNetlist ln = apply_genotype(tiny, Genotype{{Gene{"a", "n1", 0, "c", "n2", 1, 0}}});
    EquivReport r = check_equivalence(tiny, ln, EquivMode::Exhaustive);
    CHECK(r.vectors_tested == 8);
    CHECK(r.mismatches == 0);
    CHECK(r.equivalent);
}

TEST_CASE("a tampered key bit is caught exhaustively") {
    Netlist tiny = tiny_netlist();
    LockedNetlist ln = apply_genotype(tiny, Genotype{{Gene{"a", "n1", 0, "c", "n2", 1, 0}}});
    ln.correct_key.set("keyinput0", true);  // flip the bit
    EquivReport r = check_equivalence(tiny, ln, EquivMode::Exhaustive);
    CHECK_FALSE(r.equivalent);
    CHECK(r.mismatches >= 1);
}

TEST_CASE("c17 batch equivalence for random genotypes") {
    Netlist c17 = load_c17();
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(derive_seed(2, "equiv-batch", trial));
        LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, 4, rng));
        EquivReport r = check_equivalence(c17, ln, EquivMode::Exhaustive);
        REQUIRE(r.vectors_tested == 32);
        REQUIRE(r.equivalent);
    }
}

TEST_CASE("sampled mode is deterministic per seed") {
    Netlist big = random_dag_netlist(8, 120, 20);
    Rng rng(1);
    LockedNetlist ln = apply_genotype(big, sample_random_genotype(big, 4, rng));
    EquivReport a = check_equivalence(big, ln, EquivMode::Sampled, 33, 200);
    EquivReport b = check_equivalence(big, ln, EquivMode::Sampled, 33, 200);
    CHECK(a.vectors_tested == 200);
    CHECK(a.equivalent);
    CHECK(a.mismatches == b.mismatches);
}

TEST_CASE("interface mismatch is rejected") {
    Netlist tiny = tiny_netlist();
    Netlist other = parse_bench("INPUT(x)\nOUTPUT(n1)\nn1 = NOT(x)\n");
    Rng rng(1);
    LockedNetlist ln = apply_genotype(tiny, sample_random_genotype(tiny, 1, rng));
    CHECK_THROWS_AS(check_equivalence(other, ln, EquivMode::Exhaustive), ValidationError);
}

TEST_CASE("corruption_rate") {
    Netlist c17 = load_c17();

    SUBCASE("K=1 has exactly one wrong key") {
        Rng g(4);
        LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, 1, g));
        Rng rng(5);
        EquivReport r = corruption_rate(c17, ln, 1, rng, EquivMode::Exhaustive);
        CHECK(r.corruption.size() == 1);
        CHECK(r.equivalent);  // the correct key still matches

        Rng rng2(6);
        CHECK_THROWS_AS(corruption_rate(c17, ln, 2, rng2, EquivMode::Exhaustive),
                        ValidationError);
    }

    SUBCASE("functionally benign wrong key reports corruption 0 without error") {
        // n1 and n2 both equal a; swapping them changes nothing
        Netlist n = parse_bench(
            "INPUT(a)\nINPUT(x)\nINPUT(y)\nOUTPUT(n3)\nOUTPUT(n4)\n"
            "n1 = BUFF(a)\nn2 = BUFF(a)\nn3 = AND(n1, x)\nn4 = OR(n2, y)\n");
        LockedNetlist ln =
            apply_genotype(n, Genotype{{Gene{"n1", "n3", 0, "n2", "n4", 0, 0}}});
        Rng rng(7);
        EquivReport r = corruption_rate(n, ln, 1, rng, EquivMode::Exhaustive);
        REQUIRE(r.corruption.size() == 1);
        CHECK(r.corruption[0] == 0.0);
    }

    SUBCASE("c17 K=4, 10 wrong keys, mean corruption > 0") {
        Rng g(8);
        LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, 4, g));
        Rng rng(9);
        EquivReport r = corruption_rate(c17, ln, 10, rng, EquivMode::Exhaustive);
        REQUIRE(r.corruption.size() == 10);
        double mean = std::accumulate(r.corruption.begin(), r.corruption.end(), 0.0) / 10;
        CHECK(mean > 0.0);
        for (double c : r.corruption) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
    }
}
