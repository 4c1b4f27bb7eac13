#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ctlfrag/decomposition.hpp"
#include "oracles.hpp"

using namespace ctlfrag;

namespace {

const char* kFig1 = "EX(AG(p & ~(EF z))) | ~(A[p U (EF z)])";

RelationalStructure graph_structure(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Vocabulary v;
    v.add("E", 2);
    RelationalStructure a(v);
    for (std::size_t i = 0; i < n; ++i) a.add_element("v" + std::to_string(i));
    for (auto [x, y] : edges) a.add_tuple("E", {x, y});
    return a;
}

Decomposition path(std::vector<std::vector<std::size_t>> bags) {
    return Decomposition{DecompositionShape::Path, std::move(bags), {}};
}

TEST(Validate, Examples) {
    const RelationalStructure one = graph_structure(1, {});
    EXPECT_FALSE(validate_decomposition(one, path({{0}})).has_value());

    const RelationalStructure ab = graph_structure(2, {{0, 1}});
    const auto v2 = validate_decomposition(ab, path({{0}, {1}}));
    ASSERT_TRUE(v2.has_value());
    EXPECT_EQ(v2->condition, 2);
    EXPECT_NE(v2->message.find("E(0, 1)"), std::string::npos);

    const RelationalStructure abc = graph_structure(3, {});
    const auto v3 = validate_decomposition(abc, path({{0, 1}, {1, 2}, {0}}));
    ASSERT_TRUE(v3.has_value());
    EXPECT_EQ(v3->condition, 3);

    const auto v1 = validate_decomposition(abc, path({{0, 1}}));
    ASSERT_TRUE(v1.has_value());
    EXPECT_EQ(v1->condition, 1);
}

TEST(Validate, TreeShape) {
    const RelationalStructure a = graph_structure(3, {{0, 1}, {0, 2}});
    Decomposition star{DecompositionShape::Tree, {{0, 1}, {0, 2}, {0}}, {{2, 0}, {2, 1}}};
    EXPECT_FALSE(validate_decomposition(a, star).has_value());
    star.links = {{0, 1}};
    EXPECT_EQ(validate_decomposition(a, star)->condition, 0);
    star.links = {{0, 1}, {0, 1}};
    EXPECT_EQ(validate_decomposition(a, star)->condition, 0);
}

TEST(Validate, TernaryTupleNeedsOneBag) {
    const RelationalStructure a = encode(parse_formula("A[p U q]"));
    // Every pair of the AU tuple shares a bag, but no bag holds all three.
    const auto v = validate_decomposition(a, path({{0, 1}, {1, 2}, {0, 2}}));
    ASSERT_TRUE(v.has_value());
}

TEST(Width, Examples) {
    EXPECT_EQ(width(path({{0, 1}, {1, 2}})), 1U);
    EXPECT_EQ(width(path({{0}})), 0U);
    EXPECT_EQ(width(path({{0, 1, 2}, {2}})), 2U);
    EXPECT_THROW(width(path({})), Error);
}

TEST(Width, InvariantUnderBagReordering) {
    EXPECT_EQ(width(path({{2}, {0, 1, 2}})), width(path({{0, 1, 2}, {2}})));
}

TEST(PathwidthUpper, Examples) {
    EXPECT_EQ(pathwidth_upper(graph_structure(3, {{0, 1}, {1, 2}})).width, 1U);
    EXPECT_EQ(pathwidth_upper(graph_structure(4, {})).width, 0U);
    const RelationalStructure fig = encode(parse_formula(kFig1));
    EXPECT_EQ(pathwidth_upper(fig).width, pathwidth_exact(fig));
}

TEST(PathwidthExact, Examples) {
    EXPECT_EQ(pathwidth_exact(graph_structure(3, {{0, 1}, {1, 2}})), 1U);
    EXPECT_EQ(pathwidth_exact(graph_structure(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})), 3U);
    const auto star = graph_structure(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EXPECT_EQ(pathwidth_exact(star), 1U);
    EXPECT_EQ(oracle::pathwidth_by_permutation(gaifman_graph(star)), 1U);
    EXPECT_EQ(pathwidth_exact(graph_structure(1, {})), 0U);
}

TEST(PathwidthExact, ElementLimit) {
    const RelationalStructure big = graph_structure(13, {});
    EXPECT_THROW(pathwidth_exact(big), LimitError);
    EXPECT_EQ(pathwidth_exact(big, 13), 0U);
}

TEST(PathwidthExact, MatchesPermutationOracle) {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 60; ++i) {
        const RelationalStructure a = oracle::random_structure(rng, 1 + rng() % 7, 10 + rng() % 50);
        EXPECT_EQ(pathwidth_exact(a), oracle::pathwidth_by_permutation(gaifman_graph(a)));
    }
}

// Small structures of the test corpus: formula structures and random graphs
// with at most ten elements.
std::vector<RelationalStructure> corpus() {
    std::vector<RelationalStructure> out;
    for (const char* s : {"p", "AX p", "EX p & EX ~p", "A[p U q] | E[q U p]", "~(p & (q | AX r))", "AG (p -> AF q)",
                          "EF z & EG ~z & p", "AX AX AX p", "(p | q) & (q | r) & (r | p)"})
        out.push_back(encode(eliminate_implications(parse_formula(s))));
    std::mt19937_64 rng(53);
    for (int i = 0; i < 60; ++i) {
        const Formula f = eliminate_implications(oracle::random_ctl(rng, 4, {"p", "q"}));
        const RelationalStructure a = encode(f);
        if (a.size() <= 10) out.push_back(a);
    }
    for (int i = 0; i < 40; ++i) out.push_back(oracle::random_structure(rng, 1 + rng() % 10, 5 + rng() % 40));
    return out;
}

TEST(Pathwidth, CorpusProperties) {
    for (const RelationalStructure& a : corpus()) {
        const auto up = pathwidth_upper(a);
        const auto ex = pathwidth_exact_decomposition(a);
        EXPECT_FALSE(validate_decomposition(a, up.decomposition).has_value());
        EXPECT_FALSE(validate_decomposition(a, ex.decomposition).has_value());
        EXPECT_EQ(width(up.decomposition), up.width);
        EXPECT_EQ(width(ex.decomposition), ex.width);
        EXPECT_GE(up.width, ex.width);
        EXPECT_GE(ex.width, oracle::treewidth_by_subsets(gaifman_graph(a)));
    }
}

TEST(Pathwidth, TreewidthOracleSanity) {
    EXPECT_EQ(oracle::treewidth_by_subsets(gaifman_graph(graph_structure(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}))), 2U);
    EXPECT_EQ(oracle::treewidth_by_subsets(gaifman_graph(graph_structure(4, {{0, 1}, {0, 2}, {0, 3}}))), 1U);
    // The subdivided claw is a tree whose pathwidth is 2.
    const auto spider = graph_structure(7, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}});
    EXPECT_EQ(oracle::treewidth_by_subsets(gaifman_graph(spider)), 1U);
    EXPECT_EQ(oracle::pathwidth_by_permutation(gaifman_graph(spider)), 2U);
    EXPECT_EQ(pathwidth_exact(spider), 2U);
}

TEST(Parameter, Examples) {
    EXPECT_EQ(parameter(parse_formula("p")).value(), 0U);
    const FormulaParameter ax = parameter(parse_formula("AX p"));
    EXPECT_EQ(ax.pathwidth, 1U);
    EXPECT_EQ(ax.temporal_depth, 1U);
    EXPECT_EQ(ax.value(), 2U);
    const FormulaParameter fig = parameter(parse_formula(kFig1));
    EXPECT_TRUE(fig.pathwidth_exact);
    EXPECT_EQ(fig.value(), pathwidth_exact(encode(parse_formula(kFig1))) + 3);
}

TEST(Parameter, FallsBackToHeuristicAboveLimit) {
    const FormulaParameter p = parameter(parse_formula("AX (p & q) | EX (q | r) | (p & ~r)"), 4);
    EXPECT_FALSE(p.pathwidth_exact);
}

TEST(DecompositionFormat, RoundTrip) {
    const RelationalStructure fig = encode(parse_formula(kFig1));
    const Decomposition d = pathwidth_upper(fig).decomposition;
    std::stringstream ss;
    write_decomposition(ss, d);
    const Decomposition back = read_decomposition(ss);
    EXPECT_EQ(back.bags, d.bags);
    EXPECT_EQ(back.shape, d.shape);

    Decomposition t{DecompositionShape::Tree, {{0}, {0, 1}, {0, 2}}, {{0, 1}, {0, 2}}};
    std::stringstream ts;
    write_decomposition(ts, t);
    const Decomposition tb = read_decomposition(ts);
    EXPECT_EQ(tb.links, t.links);
    EXPECT_EQ(tb.shape, DecompositionShape::Tree);
}

} // namespace
