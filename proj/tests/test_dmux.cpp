#include <doctest.h>

#include "autolock/dmux.hpp"
#include "autolock/equiv.hpp"
#include "autolock/io.hpp"
#include "support/test_circuits.hpp"

using namespace autolock;
using namespace autolock::testing;

namespace {

Gene tiny_gene(int k) { return Gene{"a", "n1", 0, "c", "n2", 1, k}; }

}  // namespace

TEST_CASE("apply_genotype on TINY, k=0") {
    Netlist tiny = tiny_netlist();
    LockedNetlist ln = apply_genotype(tiny, Genotype{{tiny_gene(0)}});

    CHECK(ln.netlist.gate("n1").inputs == std::vector<std::string>{"mux_0_0", "b"});
    CHECK(ln.netlist.gate("n2").inputs == std::vector<std::string>{"n1", "mux_0_1"});
    CHECK(ln.netlist.gate("mux_0_0").inputs ==
          std::vector<std::string>{"keyinput0", "a", "c"});
    CHECK(ln.netlist.gate("mux_0_1").inputs ==
          std::vector<std::string>{"keyinput0", "c", "a"});
    CHECK(ln.netlist.key_inputs() == std::vector<std::string>{"keyinput0"});
    CHECK_FALSE(ln.correct_key.get("keyinput0"));

    EquivReport r = check_equivalence(tiny, ln, EquivMode::Exhaustive);
    CHECK(r.vectors_tested == 8);
    CHECK(r.equivalent);
}

TEST_CASE("apply_genotype on TINY, k=1 swaps the data order") {
    Netlist tiny = tiny_netlist();
    LockedNetlist ln = apply_genotype(tiny, Genotype{{tiny_gene(1)}});
    CHECK(ln.netlist.gate("mux_0_0").inputs ==
          std::vector<std::string>{"keyinput0", "c", "a"});
    CHECK(ln.netlist.gate("mux_0_1").inputs ==
          std::vector<std::string>{"keyinput0", "a", "c"});
    CHECK(ln.correct_key.get("keyinput0"));
    CHECK(check_equivalence(tiny, ln, EquivMode::Exhaustive).equivalent);
}

TEST_CASE("validate_genotype rejects a self-loop gene") {
    Netlist tiny = tiny_netlist();
    // f_i = n1 -> g_j = n1 would be a self-loop through the second MUX
    Genotype g{{Gene{"n1", "n2", 0, "a", "n1", 0, 0}}};
    ValidityReport r = validate_genotype(tiny, g);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].gene_index == 0);
    CHECK(r.violations[0].reason.find("cycle") != std::string::npos);
}

TEST_CASE("validate_genotype flags slot conflicts at the second gene") {
    Netlist tiny = tiny_netlist();
    Genotype g{{tiny_gene(0), Gene{"a", "n1", 0, "b", "n1", 1, 1}}};
    ValidityReport r = validate_genotype(tiny, g);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].gene_index == 1);
    CHECK(r.violations[0].reason.find("slot") != std::string::npos);
}

TEST_CASE("validate_genotype flags a cross edge into the transitive fanin") {
    // chain: a -> n1 -> n2 -> n3 -> n4 -> n5; f_j = n4 lies in the fanout of g_i = n1
    Netlist chain = parse_bench(
        "INPUT(a)\nOUTPUT(n5)\nn1 = BUFF(a)\nn2 = BUFF(n1)\nn3 = BUFF(n2)\n"
        "n4 = BUFF(n3)\nn5 = BUFF(n4)\n");
    Genotype g{{Gene{"a", "n1", 0, "n4", "n5", 0, 0}}};
    ValidityReport r = validate_genotype(chain, g);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].reason.find("cycle") != std::string::npos);

    // independent confirmation: the cross edge n4 -> n1 closes a directed cycle
    DfsOracle oracle(chain);
    oracle.add_edge("n4", "n1");
    CHECK(oracle.has_cycle());
}

TEST_CASE("sampled genes always pass an independent cycle oracle") {
    Netlist c17 = load_c17();
    Rng rng(1234);
    for (int i = 0; i < 1000; ++i) {
        Gene gene = sample_gene(c17, {}, {}, rng);
        DfsOracle oracle(c17);
        oracle.add_edge(gene.f_j, gene.g_i);
        oracle.add_edge(gene.f_i, gene.g_j);
        REQUIRE_FALSE(oracle.has_cycle());
        REQUIRE(c17.gate(gene.g_i).inputs[gene.pin_i] == gene.f_i);
        REQUIRE(c17.gate(gene.g_j).inputs[gene.pin_j] == gene.f_j);
    }
}

TEST_CASE("sample_random_genotype") {
    Netlist tiny = tiny_netlist();
    Rng rng(7);
    Genotype g1 = sample_random_genotype(tiny, 1, rng);
    CHECK(validate_genotype(tiny, g1).ok());

    CHECK_THROWS_AS(sample_random_genotype(tiny, 0, rng), ValidationError);

    // determinism: same seed, byte-identical serialization
    Netlist c17 = load_c17();
    Rng a(7), b(7);
    auto ga = sample_random_genotype(c17, 4, a);
    auto gb = sample_random_genotype(c17, 4, b);
    CHECK(genotype_to_json(ga, "c17").dump() == genotype_to_json(gb, "c17").dump());

    // exhaustion: c17 has 12 lockable slots, K=8 needs 16
    Rng c(7);
    CHECK_THROWS_AS(sample_random_genotype(c17, 8, c), ExhaustionError);
}

TEST_CASE("gate-count law and key naming") {
    Netlist c17 = load_c17();
    for (std::size_t k : {1u, 2u, 4u}) {
        Rng rng(derive_seed(99, "law", k));
        LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, k, rng));
        CHECK(ln.netlist.gates().size() == c17.gates().size() + 2 * k);
        REQUIRE(ln.netlist.key_inputs().size() == k);
        for (std::size_t b = 0; b < k; ++b)
            CHECK(ln.netlist.key_inputs()[b] == "keyinput" + std::to_string(b));
    }
}

TEST_CASE("structural symmetry: both drivers feed both MUXes") {
    Netlist c17 = load_c17();
    Rng rng(5);
    Genotype g = sample_random_genotype(c17, 4, rng);
    LockedNetlist ln = apply_genotype(c17, g);
    for (std::size_t b = 0; b < g.genes.size(); ++b) {
        for (int side : {0, 1}) {
            const auto& in = ln.netlist.gate(mux_gate_name(b, side)).inputs;
            bool has_fi = in[1] == g.genes[b].f_i || in[2] == g.genes[b].f_i;
            bool has_fj = in[1] == g.genes[b].f_j || in[2] == g.genes[b].f_j;
            CHECK(has_fi);
            CHECK(has_fj);
        }
    }
}

TEST_CASE("repair_genotype") {
    Netlist c17 = load_c17();
    Rng rng(42);
    Genotype valid = sample_random_genotype(c17, 3, rng);

    SUBCASE("valid genotype is returned unchanged") {
        Rng r2(1);
        Genotype out = repair_genotype(c17, valid, r2);
        CHECK(genotype_to_json(out, "x").dump() == genotype_to_json(valid, "x").dump());
    }

    SUBCASE("exactly the conflicting index is replaced") {
        Genotype broken = valid;
        broken.genes[1] = broken.genes[0];  // slot conflict at index 1
        Rng r2(1);
        Genotype out = repair_genotype(c17, broken, r2);
        CHECK(validate_genotype(c17, out).ok());
        CHECK(out.genes[0] == broken.genes[0]);
        CHECK(out.genes[2] == broken.genes[2]);
        CHECK(out.genes[1] != broken.genes[1]);
    }

    SUBCASE("random gene mixes always repair to validity") {
        Rng r2(77);
        for (int trial = 0; trial < 100; ++trial) {
            Genotype a = sample_random_genotype(c17, 4, r2);
            Genotype b = sample_random_genotype(c17, 4, r2);
            Genotype child;
            std::size_t cut = 1 + r2.below(3);
            for (std::size_t i = 0; i < 4; ++i)
                child.genes.push_back(i < cut ? a.genes[i] : b.genes[i]);
            Genotype repaired = repair_genotype(c17, child, r2);
            REQUIRE(validate_genotype(c17, repaired).ok());
        }
    }
}

TEST_CASE("extract_key") {
    Netlist c17 = load_c17();
    Rng rng(3);
    Genotype g = sample_random_genotype(c17, 3, rng);
    g.genes[0].k = 0;
    g.genes[1].k = 1;
    g.genes[2].k = 1;
    BitVector key = extract_key(apply_genotype(c17, g));
    CHECK_FALSE(key.get("keyinput0"));
    CHECK(key.get("keyinput1"));
    CHECK(key.get("keyinput2"));

    // round-trip property over random genotypes
    for (int trial = 0; trial < 50; ++trial) {
        Rng r2(derive_seed(1000, "extract", trial));
        Genotype gt = sample_random_genotype(c17, 4, r2);
        BitVector k = extract_key(apply_genotype(c17, gt));
        for (std::size_t b = 0; b < gt.genes.size(); ++b)
            REQUIRE(k.get(key_input_name(b)) == (gt.genes[b].k != 0));
    }
}

TEST_CASE("correct-key transparency for random genotypes") {
    Netlist c17 = load_c17();
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(derive_seed(55, "transparency", trial));
        LockedNetlist ln = apply_genotype(c17, sample_random_genotype(c17, 4, rng));
        REQUIRE(check_equivalence(c17, ln, EquivMode::Exhaustive).equivalent);
        REQUIRE_NOTHROW(topo_order(ln.netlist));
    }
}

TEST_CASE("locking determinism: identical bytes for identical seeds") {
    Netlist c17 = load_c17();
    Rng a(9), b(9);
    LockedNetlist la = apply_genotype(c17, sample_random_genotype(c17, 4, a));
    LockedNetlist lb = apply_genotype(c17, sample_random_genotype(c17, 4, b));
    CHECK(write_bench(la.netlist) == write_bench(lb.netlist));
    CHECK(key_file_text(la.correct_key) == key_file_text(lb.correct_key));
}
