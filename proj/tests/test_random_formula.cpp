#include <gtest/gtest.h>

#include <set>

#include "ctlfrag/random_formula.hpp"

using namespace ctlfrag;

namespace {

TEST(RandomFormula, RespectsLimits) {
    RandomFormulaOptions o;
    for (const Formula& f : random_ax_ex_suite(5, 500, o)) {
        EXPECT_LE(subformulas(f).size(), o.max_subformulas) << f.to_string();
        EXPECT_LE(temporal_depth(f), o.max_temporal_depth) << f.to_string();
        EXPECT_EQ(to_nnf(f).to_string(), f.to_string());
        EXPECT_TRUE(operator_set(f).subset_of({CtlOp::AX, CtlOp::EX}));
        for (const auto& p : propositions(f)) EXPECT_TRUE(p == "p" || p == "q" || p == "r") << p;
    }
}

TEST(RandomFormula, DeterministicPerSeed) {
    const auto a = random_ax_ex_suite(20261019, 50);
    const auto b = random_ax_ex_suite(20261019, 50);
    const auto c = random_ax_ex_suite(20261020, 50);
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].to_string(), b[i].to_string());
        same += a[i].to_string() == c[i].to_string();
    }
    EXPECT_LT(same, a.size());
}

TEST(RandomFormula, ReachesTemporalDepth) {
    std::set<std::size_t> depths;
    for (const Formula& f : random_ax_ex_suite(7, 300)) depths.insert(temporal_depth(f));
    EXPECT_EQ(depths, (std::set<std::size_t>{0, 1, 2, 3}));
}

TEST(AllFormulas, CountsBySize) {
    // Size 1: true, false, three propositions. Size 2: three negated
    // propositions and ten AX/EX of size 1.
    EXPECT_EQ(all_ax_ex_formulas(1).size(), 5U);
    EXPECT_EQ(all_ax_ex_formulas(2).size(), 5U + 3U + 10U);
    const auto four = all_ax_ex_formulas(4);
    EXPECT_EQ(four.size(), 506U);
    std::set<std::string> unique;
    for (const Formula& f : four) {
        EXPECT_LE(f.size(), 4U);
        EXPECT_EQ(to_nnf(f).to_string(), f.to_string());
        unique.insert(f.to_string());
    }
    EXPECT_EQ(unique.size(), four.size());
}

} // namespace
