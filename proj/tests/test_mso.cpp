#include <gtest/gtest.h>

#include <random>

#include "ctlfrag/mso.hpp"
#include "oracles.hpp"

using namespace ctlfrag;

namespace {

RelationalStructure unary(std::size_t n, const std::set<std::size_t>& p) {
    Vocabulary v;
    v.add("P", 1);
    RelationalStructure a(v);
    for (std::size_t i = 0; i < n; ++i) a.add_element("e" + std::to_string(i));
    for (std::size_t e : p) a.add_tuple("P", {e});
    return a;
}

TEST(Evaluate, Examples) {
    EXPECT_TRUE(evaluate(unary(1, {0}), mso::exists("x", mso::atom("P", {"x"}))));
    MsoAssignment asg;
    asg.elements["x"] = 0;
    EXPECT_FALSE(evaluate(unary(2, {1}), mso::atom("P", {"x"}), asg));
    EXPECT_TRUE(evaluate(unary(3, {}), mso::exists_set("X", mso::forall("x", mso::in("X", "x")))));
}

TEST(Evaluate, EmptyUniverse) {
    const RelationalStructure a = unary(0, {});
    EXPECT_FALSE(evaluate(a, mso::exists("x", mso::top())));
    EXPECT_TRUE(evaluate(a, mso::forall("x", mso::bottom())));
    EXPECT_TRUE(evaluate(a, mso::exists_set("X", mso::top())));
}

TEST(Evaluate, Errors) {
    const RelationalStructure a = unary(2, {0});
    EXPECT_THROW(evaluate(a, mso::atom("P", {"x"})), Error);
    EXPECT_THROW(evaluate(a, mso::exists("x", mso::atom("Q", {"x"}))), Error);
    EXPECT_THROW(evaluate(a, mso::exists("x", mso::atom("P", {"x", "x"}))), Error);
    EXPECT_THROW(evaluate(a, mso::exists("x", mso::in("X", "x"))), Error);
    MsoAssignment out_of_range;
    out_of_range.elements["x"] = 7;
    EXPECT_THROW(evaluate(a, mso::atom("P", {"x"}), out_of_range), Error);
    EXPECT_THROW(mso::exists("x", mso::in("x", "y")), Error);
    EXPECT_THROW(mso::exists_set("X", mso::top(), "X"), Error);
}

TEST(Evaluate, SubsetBoundedQuantifiers) {
    // Some nonempty subset of P avoids element 0, iff P has an element other than 0.
    const auto f = mso::exists_set("P0", mso::forall("x", mso::iff(mso::in("P0", "x"), mso::atom("P", {"x"}))));
    const auto g = [&](const std::string& body_set) {
        return mso::exists_set(
            "P0", mso::land({mso::forall("x", mso::iff(mso::in("P0", "x"), mso::atom("P", {"x"}))),
                             mso::exists_set("Y",
                                             mso::land({mso::exists("y", mso::in("Y", "y")),
                                                        mso::forall("y", mso::implies(mso::in("Y", "y"), mso::lnot(mso::eq("y", "z"))))}),
                                             body_set)}));
    };
    EXPECT_TRUE(evaluate(unary(3, {0, 2}), f));
    MsoAssignment z0;
    z0.elements["z"] = 0;
    EXPECT_TRUE(evaluate(unary(3, {0, 2}), g("P0"), z0));
    EXPECT_FALSE(evaluate(unary(3, {0}), g("P0"), z0));
}

// Random formulas over P/1, E/2 with both quantifier kinds.
MsoFormula random_mso(std::mt19937_64& rng, int depth, std::vector<std::string>& el, std::vector<std::string>& sets) {
    auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
    if (depth == 0 || rng() % 5 == 0) {
        switch (el.empty() ? 0 : rng() % 5) {
        case 0: return rng() % 2 ? mso::top() : mso::bottom();
        case 1: return mso::atom("P", {pick(el)});
        case 2: return mso::atom("E", {pick(el), pick(el)});
        case 3: return mso::eq(pick(el), pick(el));
        default: return sets.empty() ? mso::atom("P", {pick(el)}) : mso::in(pick(sets), pick(el));
        }
    }
    switch (rng() % 9) {
    case 0: return mso::lnot(random_mso(rng, depth - 1, el, sets));
    case 1: return mso::land({random_mso(rng, depth - 1, el, sets), random_mso(rng, depth - 1, el, sets)});
    case 2: return mso::lor({random_mso(rng, depth - 1, el, sets), random_mso(rng, depth - 1, el, sets)});
    case 3: return mso::implies(random_mso(rng, depth - 1, el, sets), random_mso(rng, depth - 1, el, sets));
    case 4: return mso::iff(random_mso(rng, depth - 1, el, sets), random_mso(rng, depth - 1, el, sets));
    case 5:
    case 6: {
        const std::string x = "x" + std::to_string(el.size());
        el.push_back(x);
        MsoFormula body = random_mso(rng, depth - 1, el, sets);
        el.pop_back();
        return rng() % 2 ? mso::exists(x, body) : mso::forall(x, body);
    }
    default: {
        const std::string x = "X" + std::to_string(sets.size());
        const std::string bound = !sets.empty() && rng() % 3 == 0 ? pick(sets) : "";
        sets.push_back(x);
        MsoFormula body = random_mso(rng, depth - 1, el, sets);
        sets.pop_back();
        return rng() % 2 ? mso::exists_set(x, body, bound) : mso::forall_set(x, body, bound);
    }
    }
}

TEST(Evaluate, AgreesWithNaiveSemantics) {
    std::mt19937_64 rng(59);
    int checked = 0;
    for (int i = 0; i < 600; ++i) {
        std::vector<std::string> el, sets;
        const MsoFormula f = random_mso(rng, 5, el, sets);
        const RelationalStructure a = oracle::random_structure(rng, 1 + rng() % 4, 30);
        std::map<std::string, std::size_t> e;
        std::map<std::string, std::set<std::size_t>> s;
        ASSERT_EQ(evaluate(a, f), oracle::naive_mso(a, f, e, s)) << f.to_string();
        ++checked;
    }
    EXPECT_EQ(checked, 600);
}

TEST(Evaluate, QuantifierDuality) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> el{"x"}, sets{"S"};
        const MsoFormula g = random_mso(rng, 4, el, sets);
        const RelationalStructure a = oracle::random_structure(rng, 1 + rng() % 4, 30);
        const auto es = mso::exists_set("S", mso::lnot(mso::exists("x", mso::lnot(g))));
        const auto fs = mso::exists_set("S", mso::forall("x", g));
        EXPECT_EQ(evaluate(a, es), evaluate(a, fs));
        const auto nes = mso::lnot(mso::exists_set("S", mso::lnot(mso::forall("x", g))));
        const auto fas = mso::forall_set("S", mso::forall("x", g));
        EXPECT_EQ(evaluate(a, nes), evaluate(a, fas));
    }
}

TEST(ParseMso, RoundTripAndErrors) {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::string> el, sets;
        const MsoFormula f = random_mso(rng, 5, el, sets);
        EXPECT_EQ(parse_mso(f.to_string()).to_string(), f.to_string());
    }
    const MsoFormula c = parse_mso("; comment\n(exists-subset Y X (forall y (implies (in Y y) (P y))))");
    EXPECT_EQ(c.kind(), MsoKind::ExistsSet);
    EXPECT_EQ(c.bound(), "X");
    EXPECT_EQ(c.free_set_vars(), std::vector<std::string>{"X"});
    for (const char* bad : {"", "(", "(and", "(exists x)", "(in X)", "(foo", "(= x)", "true false", "(not a b)"})
        EXPECT_THROW(parse_mso(bad), ParseError) << bad;
}

TEST(MsoFormula, SizesAndFreeVariables) {
    const MsoFormula shared = mso::atom("P", {"x"});
    const MsoFormula f = mso::land({shared, shared, mso::exists("x", shared)});
    EXPECT_EQ(f.tree_size(), 5U);
    EXPECT_EQ(f.dag_size(), 3U);
    EXPECT_EQ(f.free_element_vars(), std::vector<std::string>{"x"});
    EXPECT_FALSE(f.has_set_quantifier());
    EXPECT_EQ(f.predicates().at("P"), 1U);
    EXPECT_EQ(mso::land({}).kind(), MsoKind::True);
    EXPECT_EQ(mso::lor({}).kind(), MsoKind::False);
}

} // namespace
