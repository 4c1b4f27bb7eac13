#include <gtest/gtest.h>

#include <random>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/kripke.hpp"
#include "oracles.hpp"

using namespace ctlfrag;

namespace {

const char* kFig1 = "EX(AG(p & ~(EF z))) | ~(A[p U (EF z)])";

TEST(Parse, ConjunctionOfNextOperators) {
    EXPECT_EQ(parse_formula("AX p & EX ~p"), land(AX(prop("p")), EX(lnot(prop("p")))));
}

TEST(Parse, UntilWithNestedOperator) {
    EXPECT_EQ(parse_formula("A[p U EF z]"), AU(prop("p"), EF(prop("z"))));
}

TEST(Parse, FigureFormula) {
    const Formula expected = lor(EX(AG(land(prop("p"), lnot(EF(prop("z")))))), lnot(AU(prop("p"), EF(prop("z")))));
    EXPECT_EQ(parse_formula(kFig1), expected);
}

TEST(Parse, PrecedenceAndAssociativity) {
    EXPECT_EQ(parse_formula("p | q & r"), lor(prop("p"), land(prop("q"), prop("r"))));
    EXPECT_EQ(parse_formula("p -> q -> r"), implies(prop("p"), implies(prop("q"), prop("r"))));
    EXPECT_EQ(parse_formula("~AX p"), lnot(AX(prop("p"))));
    EXPECT_EQ(parse_formula("E[true U p]"), EU(top(), prop("p")));
    EXPECT_EQ(parse_formula("p <-> false"), iff(prop("p"), bottom()));
}

TEST(Parse, RejectsMalformedInput) {
    for (const char* bad : {"", "p &", "A[p U", "AX", "(p", "p q", "A p", "E[p q]", "AX & p", "EX)"})
        EXPECT_THROW(parse_formula(bad), ParseError) << bad;
}

TEST(Parse, PrintParseRoundTrip) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const Formula f = oracle::random_ctl(rng, 5, {"p", "q", "z1"});
        EXPECT_EQ(parse_formula(f.to_string()), f) << f.to_string();
    }
}

TEST(Nnf, DualitiesOnExamples) {
    EXPECT_EQ(to_nnf(parse_formula("~AX p")), EX(lnot(prop("p"))));
    EXPECT_EQ(to_nnf(parse_formula("~(p & q)")), lor(lnot(prop("p")), lnot(prop("q"))));
    EXPECT_EQ(to_nnf(parse_formula("~AG p")), EF(lnot(prop("p"))));
}

TEST(Nnf, EquivalentOnAllSmallStructures) {
    // Every structure with at most two worlds over {p, q}.
    std::vector<Formula> fs;
    for (const char* s : {"~AX p", "~AG p", "~(p & q)", "~A[p U q]", "~E[p U q]", "~AF (p -> q)", "~EG ~p",
                          "p <-> EX q", "~(AX p <-> EF q)", "~~E[~p U AG q]"})
        fs.push_back(parse_formula(s));
    std::size_t checked = 0;
    for (std::size_t n = 1; n <= 2; ++n)
        oracle::for_each_kripke(n, {"p", "q"}, [&](const KripkeStructure& k) {
            for (const auto& f : fs) {
                const Formula g = to_nnf(f);
                for (std::size_t w = 0; w < n; ++w) ASSERT_EQ(model_check(k, w, f), model_check(k, w, g)) << f.to_string();
            }
            ++checked;
        });
    EXPECT_GT(checked, 100U);
}

TEST(Nnf, RandomFormulasOnRandomStructures) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        const Formula f = oracle::random_ctl(rng, 4, {"p", "q"});
        const Formula g = to_nnf(f);
        ASSERT_TRUE(is_nnf(g)) << g.to_string();
        const KripkeStructure k = oracle::random_kripke(rng, 1 + rng() % 3, {"p", "q"});
        for (std::size_t w = 0; w < k.world_count(); ++w) ASSERT_EQ(model_check(k, w, f), model_check(k, w, g)) << f.to_string();
    }
}

TEST(Nnf, TemporalDepthPreserved) {
    // The until dualities put E[.. U ..] and EG side by side, so no operator
    // nests deeper than before.
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
        const Formula f = oracle::random_ctl(rng, 5, {"p", "q"});
        EXPECT_EQ(temporal_depth(to_nnf(f)), temporal_depth(f)) << f.to_string();
    }
    EXPECT_EQ(temporal_depth(to_nnf(parse_formula("~A[p U q]"))), 1U);
    EXPECT_EQ(temporal_depth(to_nnf(parse_formula("~E[p U A[q U p]]"))), 2U);
}

TEST(TemporalDepth, Examples) {
    EXPECT_EQ(temporal_depth(parse_formula("p & q")), 0U);
    EXPECT_EQ(temporal_depth(parse_formula(kFig1)), 3U);
    EXPECT_EQ(temporal_depth(parse_formula("AX AX AX p")), 3U);
}

TEST(Subformulas, Examples) {
    EXPECT_EQ(subformulas(prop("p")).size(), 1U);
    const auto ax = subformulas(AX(prop("p")));
    ASSERT_EQ(ax.size(), 2U);
    EXPECT_EQ(ax[0], AX(prop("p")));
    EXPECT_EQ(ax[1], prop("p"));
    const auto dup = subformulas(parse_formula("(p & q) | (p & q)"));
    ASSERT_EQ(dup.size(), 4U);
    EXPECT_EQ(dup[1], parse_formula("p & q"));
}

TEST(Subformulas, BoundedByNodeCount) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Formula f = oracle::random_ctl(rng, 6, {"p", "q"});
        EXPECT_LE(subformulas(f).size(), f.size());
    }
}

TEST(OperatorSet, Examples) {
    EXPECT_EQ(operator_set(parse_formula("AX p & EX q")), (CtlOperatorSet{CtlOp::AX, CtlOp::EX}));
    EXPECT_TRUE(operator_set(parse_formula("p | ~q")).empty());
    EXPECT_EQ(operator_set(parse_formula(kFig1)), (CtlOperatorSet{CtlOp::EX, CtlOp::AG, CtlOp::EF, CtlOp::AU}));
    EXPECT_TRUE(is_propositional(parse_formula("p -> q")));
}

TEST(Propositions, Collected) {
    EXPECT_EQ(propositions(parse_formula(kFig1)), (std::set<std::string>{"p", "z"}));
}

} // namespace
