#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ctlfrag/kripke.hpp"
#include "oracles.hpp"

using namespace ctlfrag;

namespace {

KripkeStructure loop_with(const std::string& p) {
    KripkeStructure k(1);
    k.add_edge(0, 0);
    k.label(0, p);
    return k;
}

TEST(Validate, Examples) {
    EXPECT_FALSE(validate(loop_with("p")).has_value());
    const auto v = validate(KripkeStructure(1));
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->world, 0U);
    KripkeStructure k(2);
    k.add_edge(0, 1);
    k.add_edge(1, 1);
    EXPECT_FALSE(validate(k).has_value());
}

TEST(Validate, NamesFirstOffendingWorld) {
    KripkeStructure k(3);
    k.add_edge(0, 1);
    const auto v = validate(k);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->world, 1U);
}

TEST(ModelCheck, Examples) {
    const KripkeStructure k = loop_with("p");
    EXPECT_TRUE(model_check(k, 0, parse_formula("AG p")));
    EXPECT_FALSE(model_check(k, 0, parse_formula("EX ~p")));

    KripkeStructure c(2);
    c.add_edge(0, 1);
    c.add_edge(1, 1);
    c.label(0, "p");
    c.label(1, "q");
    EXPECT_TRUE(model_check(c, 0, parse_formula("A[p U q]")));
    EXPECT_FALSE(model_check(c, 0, parse_formula("A[q U p] & AX p")));
}

TEST(ModelCheck, RejectsUnknownProposition) {
    EXPECT_THROW(model_check(loop_with("p"), 0, parse_formula("EX r")), Error);
}

TEST(ModelCheck, RejectsInvalidStructure) {
    KripkeStructure k(1);
    k.declare_proposition("p");
    EXPECT_THROW(model_check(k, 0, parse_formula("p")), Error);
}

TEST(ModelCheck, AgreesWithPathUnfolding) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 400; ++i) {
        const KripkeStructure k = oracle::random_dag_with_sinks(rng, 1 + rng() % 5, {"p", "q"});
        const Formula f = oracle::random_ctl(rng, 4, {"p", "q"});
        for (std::size_t w = 0; w < k.world_count(); ++w)
            ASSERT_EQ(model_check(k, w, f), oracle::path_holds(k, w, f)) << f.to_string() << " at " << w;
    }
}

TEST(ModelCheck, Dualities) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
        const KripkeStructure k = oracle::random_kripke(rng, 1 + rng() % 4, {"p", "q"});
        const Formula f = oracle::random_ctl(rng, 3, {"p", "q"});
        for (std::size_t w = 0; w < k.world_count(); ++w) {
            EXPECT_EQ(model_check(k, w, AG(f)), !model_check(k, w, EF(lnot(f))));
            EXPECT_EQ(model_check(k, w, AF(f)), !model_check(k, w, EG(lnot(f))));
            EXPECT_EQ(model_check(k, w, AX(f)), !model_check(k, w, EX(lnot(f))));
        }
    }
}

TEST(ModelCheck, SatisfyingWorldsMatchesPointwise) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const KripkeStructure k = oracle::random_kripke(rng, 1 + rng() % 5, {"p"});
        const Formula f = oracle::random_ctl(rng, 3, {"p"});
        const auto sat = satisfying_worlds(k, f);
        for (std::size_t w = 0; w < k.world_count(); ++w) EXPECT_EQ(sat[w] != 0, model_check(k, w, f));
    }
}

TEST(KripkeFormat, RoundTrip) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        KripkeStructure k = oracle::random_kripke(rng, 1 + rng() % 5, {"p", "q", "r"});
        std::stringstream ss;
        write_kripke(ss, k);
        const KripkeStructure back = read_kripke(ss);
        ASSERT_EQ(back.world_count(), k.world_count());
        EXPECT_EQ(back.propositions(), k.propositions());
        for (std::size_t w = 0; w < k.world_count(); ++w) {
            EXPECT_EQ(back.successors(w), k.successors(w));
            EXPECT_EQ(back.labels(w), k.labels(w));
        }
    }
}

TEST(KripkeFormat, CommentsAndErrors) {
    std::istringstream ok("# two worlds\nworlds 2\nedge 0 1 # forward\nedge 1 1\nlabel 1 p q\n");
    const KripkeStructure k = read_kripke(ok);
    EXPECT_TRUE(k.holds(1, "q"));
    EXPECT_FALSE(k.holds(0, "p"));
    for (const char* bad : {"edge 0 1\n", "worlds 2\nedge 0 5\n", "worlds 0\n", "worlds 1\nfoo\n", "", "worlds 1\nlabel 0 P!\n"}) {
        std::istringstream in(bad);
        EXPECT_THROW(read_kripke(in), ParseError) << bad;
    }
}

} // namespace
