#pragma once

// Seeded random and exhaustive generation of NNF CTL({AX, EX}) formulas.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/error.hpp"

namespace ctlfrag {

struct RandomFormulaOptions {
    std::size_t max_subformulas = 8;
    std::size_t max_temporal_depth = 3;
    std::vector<std::string> propositions{"p", "q", "r"};
    /// Upper bound on the tree size of a draw before the limits are checked.
    std::size_t max_size = 16;
};

namespace detail {

inline Formula random_ax_ex(std::mt19937_64& rng, const RandomFormulaOptions& o, std::size_t budget,
                            std::size_t depth_left) {
    auto pick = [&](std::uint64_t n) { return rng() % n; };
    auto literal = [&]() {
        const std::uint64_t c = pick(o.propositions.size() * 2 + 2);
        if (c == 0) return top();
        if (c == 1) return bottom();
        Formula p = prop(o.propositions[(c - 2) / 2]);
        return (c - 2) % 2 == 0 ? p : lnot(p);
    };
    if (budget <= 2) return literal();
    switch (pick(depth_left > 0 ? 6 : 3)) {
    case 0: return literal();
    case 1:
    case 2: {
        const std::size_t left = 1 + pick(budget - 2);
        Formula a = random_ax_ex(rng, o, left, depth_left);
        Formula b = random_ax_ex(rng, o, budget - 1 - left, depth_left);
        return pick(2) == 0 ? land(a, b) : lor(a, b);
    }
    default: {
        Formula body = random_ax_ex(rng, o, budget - 1, depth_left - 1);
        return pick(2) == 0 ? AX(body) : EX(body);
    }
    }
}

} // namespace detail

/// Draws formulas from `rng` until one meets the subformula and depth limits.
inline Formula random_ax_ex_formula(std::mt19937_64& rng, const RandomFormulaOptions& o = {}) {
    if (o.propositions.empty()) throw Error("random_ax_ex_formula: no propositions");
    for (;;) {
        const std::size_t budget = 3 + rng() % (o.max_size - 2);
        Formula f = detail::random_ax_ex(rng, o, budget, o.max_temporal_depth);
        if (subformulas(f).size() <= o.max_subformulas && temporal_depth(f) <= o.max_temporal_depth) return f;
    }
}

inline std::vector<Formula> random_ax_ex_suite(std::uint64_t seed, std::size_t count,
                                               const RandomFormulaOptions& o = {}) {
    std::mt19937_64 rng(seed);
    std::vector<Formula> out;
    out.reserve(count);
    while (out.size() < count) out.push_back(random_ax_ex_formula(rng, o));
    return out;
}

/// Every NNF CTL({AX, EX}) formula over `props` (with true and false) whose
/// tree size is at most `max_size`, by ascending size.
inline std::vector<Formula> all_ax_ex_formulas(std::size_t max_size,
                                               const std::vector<std::string>& props = {"p", "q", "r"}) {
    std::vector<std::vector<Formula>> by_size(max_size + 1);
    for (std::size_t s = 1; s <= max_size; ++s) {
        auto& out = by_size[s];
        if (s == 1) {
            out.push_back(top());
            out.push_back(bottom());
            for (const auto& p : props) out.push_back(prop(p));
        }
        if (s == 2)
            for (const auto& p : props) out.push_back(lnot(prop(p)));
        if (s >= 2)
            for (const auto& g : by_size[s - 1]) {
                out.push_back(AX(g));
                out.push_back(EX(g));
            }
        for (std::size_t l = 1; l + 2 <= s; ++l)
            for (const auto& a : by_size[l])
                for (const auto& b : by_size[s - 1 - l]) {
                    out.push_back(land(a, b));
                    out.push_back(lor(a, b));
                }
    }
    std::vector<Formula> all;
    for (const auto& v : by_size) all.insert(all.end(), v.begin(), v.end());
    return all;
}

} // namespace ctlfrag
