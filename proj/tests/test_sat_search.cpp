#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ctlfrag/random_formula.hpp"
#include "ctlfrag/sat_search.hpp"
#include "oracles.hpp"

using namespace ctlfrag;

namespace {

BruteForceResult brute(const std::string& text, std::size_t worlds, BruteForceOptions o = {}) {
    return brute_force_sat(parse_formula(text), worlds, o);
}

TEST(BruteForce, Examples) {
    const auto sat = brute("EX p & EX ~p", 3);
    ASSERT_EQ(sat.status, SearchStatus::Satisfiable);
    EXPECT_TRUE(model_check(*sat.witness, sat.witness_world, parse_formula("EX p & EX ~p")));
    EXPECT_EQ(brute("AX p & EX ~p", 3).status, SearchStatus::NoModelUpToBound);
    EXPECT_EQ(brute("true", 1).status, SearchStatus::Satisfiable);
}

TEST(BruteForce, SmallestWitnessFirst) {
    // Two successors that disagree on p force a second world.
    const auto r = brute("EX p & EX ~p & ~p", 4);
    ASSERT_EQ(r.status, SearchStatus::Satisfiable);
    EXPECT_EQ(r.witness->world_count(), 2U);
    EXPECT_EQ(r.complete_up_to, 1U);
}

TEST(BruteForce, BudgetExhaustionIsDistinct) {
    BruteForceOptions o;
    o.budget = 10;
    const auto r = brute("AX p & EX ~p", 3, o);
    EXPECT_EQ(r.status, SearchStatus::BudgetExhausted);
    EXPECT_LE(r.candidates, 10U);
    EXPECT_THROW(brute("p", 0), Error);
}

TEST(BruteForce, AboveEnumerationCapReportsBudget) {
    // Unsatisfiable, so the search reaches the world cap.
    EXPECT_EQ(brute("p & ~p", kMaxEnumeratedWorlds + 1).status, SearchStatus::BudgetExhausted);
}

TEST(BruteForce, WitnessesPassModelCheck) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Formula f = oracle::random_ctl(rng, 3, {"p", "q"});
        const auto r = brute_force_sat(f, 3);
        if (r.status == SearchStatus::Satisfiable) {
            ASSERT_FALSE(validate(*r.witness).has_value());
            EXPECT_TRUE(model_check(*r.witness, r.witness_world, f)) << f.to_string();
        }
    }
}

TEST(BruteForce, AgreesWithExhaustiveModelChecking) {
    // Satisfiable within two worlds iff some structure with at most two
    // worlds satisfies the formula at some world.
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        const Formula f = oracle::random_ctl(rng, 3, {"p", "q"});
        bool found = false;
        for (std::size_t n = 1; n <= 2 && !found; ++n)
            oracle::for_each_kripke(n, {"p", "q"}, [&](const KripkeStructure& k) {
                for (std::size_t w = 0; w < n; ++w) found = found || model_check(k, w, f);
            });
        EXPECT_EQ(brute_force_sat(f, 2).status == SearchStatus::Satisfiable, found) << f.to_string();
    }
}

TEST(BruteForce, BitParallelMatchesScalar) {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 150; ++i) {
        const Formula f = oracle::random_ctl(rng, 3, {"p", "q"});
        BruteForceOptions scalar;
        scalar.bit_parallel = false;
        const auto a = brute_force_sat(f, 3);
        const auto b = brute_force_sat(f, 3, scalar);
        ASSERT_EQ(a.status, b.status) << f.to_string();
        EXPECT_EQ(a.candidates, b.candidates) << f.to_string();
        if (a.status == SearchStatus::Satisfiable) {
            std::ostringstream wa, wb;
            write_kripke(wa, *a.witness);
            write_kripke(wb, *b.witness);
            EXPECT_EQ(wa.str(), wb.str());
        }
    }
}

TEST(BruteForce, WorkerCountDoesNotChangeWitness) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 60; ++i) {
        const Formula f = oracle::random_ctl(rng, 3, {"p", "q"});
        BruteForceOptions many;
        many.workers = 3;
        const auto a = brute_force_sat(f, 3);
        const auto b = brute_force_sat(f, 3, many);
        ASSERT_EQ(a.status, b.status);
        if (a.status == SearchStatus::Satisfiable) {
            std::ostringstream wa, wb;
            write_kripke(wa, *a.witness);
            write_kripke(wb, *b.witness);
            EXPECT_EQ(wa.str(), wb.str()) << f.to_string();
        }
    }
}

// Rooted frames (every world reachable from world 0, total relation) up to
// isomorphisms fixing world 0, counted by canonicalising every relation.
std::size_t rooted_frame_classes(std::size_t n) {
    std::set<std::vector<std::uint32_t>> classes;
    const std::uint32_t row = (1U << n) - 1;
    for (std::uint64_t edges = 0; edges < (std::uint64_t{1} << (n * n)); ++edges) {
        std::vector<std::uint32_t> succ(n);
        bool total = true;
        for (std::size_t w = 0; w < n; ++w) {
            succ[w] = static_cast<std::uint32_t>(edges >> (w * n)) & row;
            total = total && succ[w] != 0;
        }
        if (!total) continue;
        std::uint32_t seen = 1, frontier = 1;
        while (frontier) {
            const std::size_t u = static_cast<std::size_t>(__builtin_ctz(frontier));
            frontier &= frontier - 1;
            frontier |= succ[u] & ~seen;
            seen |= succ[u];
        }
        if (seen != row) continue;
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::uint32_t> best;
        do {
            std::vector<std::uint32_t> image(n, 0);
            for (std::size_t w = 0; w < n; ++w)
                for (std::size_t v = 0; v < n; ++v)
                    if (succ[w] >> v & 1U) image[perm[w]] |= 1U << perm[v];
            if (best.empty() || image < best) best = image;
        } while (std::next_permutation(perm.begin() + 1, perm.end()));
        classes.insert(best);
    }
    return classes.size();
}

TEST(Frames, OnePerIsomorphismClass) {
    for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(detail::canonical_frames(n).size(), rooted_frame_classes(n)) << n;
}

TEST(TreeSat, Examples) {
    EXPECT_FALSE(bounded_tree_sat(parse_formula("AX p & EX ~p"), 1));
    EXPECT_TRUE(bounded_tree_sat(parse_formula("EX p & EX ~p"), 1));
    EXPECT_FALSE(bounded_tree_sat(parse_formula("p & ~p"), 0));
    EXPECT_THROW(bounded_tree_sat(parse_formula("AG p"), 1), FragmentError);
    EXPECT_THROW(bounded_tree_sat(parse_formula("~AX p"), 1), FragmentError);
}

TEST(TreeSat, ModelsAreTreesOfBoundedDepth) {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        const Formula f = random_ax_ex_formula(rng);
        const std::size_t td = temporal_depth(f);
        const auto m = bounded_tree_model(f, td);
        if (!m) continue;
        EXPECT_LE(m->depth, td);
        EXPECT_LE(m->structure.world_count(), tree_model_world_bound(f));
        EXPECT_TRUE(model_check(m->structure, m->root, f)) << f.to_string();
    }
}

TEST(TreeSat, AgreesWithBruteForceAtTreeBound) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 150; ++i) {
        const Formula f = random_ax_ex_formula(rng);
        const std::size_t bound = tree_model_world_bound(f);
        if (bound > 4) continue;
        BruteForceOptions o;
        o.budget = ~std::uint64_t{0};
        const auto r = brute_force_sat(f, bound, o);
        EXPECT_EQ(bounded_tree_sat(f, temporal_depth(f)), r.status == SearchStatus::Satisfiable) << f.to_string();
    }
}

TEST(TreeSat, DeeperSearchDoesNotChangeAnswer) {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 100; ++i) {
        const Formula f = random_ax_ex_formula(rng);
        const std::size_t td = temporal_depth(f);
        EXPECT_EQ(bounded_tree_sat(f, td), bounded_tree_sat(f, td + 1)) << f.to_string();
    }
}

TEST(TreeSat, WorldBound) {
    EXPECT_EQ(tree_model_world_bound(parse_formula("p")), 1U);
    EXPECT_EQ(tree_model_world_bound(parse_formula("EX p & EX ~p")), 3U);
    // Root, two children, and up to one grandchild under each child.
    EXPECT_EQ(tree_model_world_bound(parse_formula("EX p & EX EX q")), 5U);
}

} // namespace
