#pragma once

// The uniform MSO family deciding satisfiability of NNF CTL({AX, EX})
// formulas on their structures, and the pipeline built on it.

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/error.hpp"
#include "ctlfrag/mso.hpp"
#include "ctlfrag/structure.hpp"

namespace ctlfrag {

namespace detail {

// Connectives of the fixed Boolean basis with their arities.
struct BasisConnective {
    Kind kind;
    std::size_t arity;
};
inline constexpr BasisConnective kBasis[] = {{Kind::And, 2}, {Kind::Or, 2}, {Kind::Not, 1}};

// Exactly one of `fs`: at least one, and no two together.
inline MsoFormula exactly_one(const std::vector<MsoFormula>& fs) {
    std::vector<MsoFormula> parts{mso::lor(fs)};
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) parts.push_back(mso::lnot(mso::land({fs[i], fs[j]})));
    return mso::land(parts);
}

// exists y (P(y, x) and forall z (P(z, x) -> z = y))
inline MsoFormula unique_argument(const std::string& predicate, const std::string& x) {
    return mso::exists("y", mso::land({mso::atom(predicate, {"y", x}),
                                       mso::forall("z", mso::implies(mso::atom(predicate, {"z", x}), mso::eq("z", "y")))}));
}

// Boolean semantics of constants and connectives at element `x` for set `m`,
// with the argument variables bound by guarded quantifiers.
inline MsoFormula boolean_consistency(const std::string& m, const std::string& x, const std::string& level) {
    std::vector<MsoFormula> parts{
        mso::implies(mso::atom(pred::kConstTrue, {x}), mso::in(m, x)),
        mso::implies(mso::atom(pred::kConstFalse, {x}), mso::lnot(mso::in(m, x))),
    };
    for (const auto& c : kBasis) {
        std::vector<std::string> ys;
        for (std::size_t i = 1; i <= c.arity; ++i) ys.push_back("y" + level + "_" + std::to_string(i));
        MsoFormula value;
        if (c.kind == Kind::Not) value = mso::lnot(mso::in(m, ys[0]));
        else {
            std::vector<MsoFormula> args;
            for (const auto& y : ys) args.push_back(mso::in(m, y));
            value = c.kind == Kind::And ? mso::land(args) : mso::lor(args);
        }
        MsoFormula f = mso::iff(mso::in(m, x), value);
        for (std::size_t i = c.arity; i-- > 0;)
            f = mso::forall(ys[i], mso::implies(mso::atom(pred::conn(c.kind, i + 1), {ys[i], x}), f));
        parts.push_back(f);
    }
    return mso::land(parts);
}

inline std::string set_var(std::size_t i) { return "M" + std::to_string(i); }

} // namespace detail

/// Structural well-formedness of formula structures over {and, or, not, AX, EX}.
inline MsoFormula build_theta_struc() {
    using namespace mso;
    std::vector<MsoFormula> parents;
    for (const auto& c : detail::kBasis)
        for (std::size_t i = 1; i <= c.arity; ++i) parents.push_back(atom(pred::conn(c.kind, i), {"x", "y"}));
    parents.push_back(atom(pred::body(CtlOp::AX), {"x", "y"}));
    parents.push_back(atom(pred::body(CtlOp::EX), {"x", "y"}));

    std::vector<MsoFormula> connective_cases;
    for (const auto& c : detail::kBasis) {
        std::vector<MsoFormula> positions;
        for (std::size_t i = 1; i <= c.arity; ++i) positions.push_back(detail::unique_argument(pred::conn(c.kind, i), "x"));
        connective_cases.push_back(land(positions));
    }

    return land({
        forall("x", forall("y", implies(land({atom(pred::kRepr, {"x"}), atom(pred::kRepr, {"y"})}), eq("x", "y")))),
        forall("x", implies(lnot(atom(pred::kRepr, {"x"})),
                            exists("y", land({lnot(atom(pred::kVar, {"y"})), lor(parents)})))),
        forall("x", detail::exactly_one({
                        atom(pred::kVar, {"x"}),
                        lor({atom(pred::kConstTrue, {"x"}), atom(pred::kConstFalse, {"x"})}),
                        lor(connective_cases),
                        detail::unique_argument(pred::body(CtlOp::AX), "x"),
                        detail::unique_argument(pred::body(CtlOp::EX), "x"),
                    })),
        forall("x", forall("y", land({implies(atom(pred::body(CtlOp::AX), {"y", "x"}), atom(pred::repr(CtlOp::AX), {"x"})),
                                      implies(atom(pred::body(CtlOp::EX), {"y", "x"}), atom(pred::repr(CtlOp::EX), {"x"}))}))),
    });
}

namespace detail {

// forall z (MAX_i(z) -> exists w (body_AX(w, z) and M_{i-1}(w)))
inline MsoFormula ax_bodies_hold(std::size_t i) {
    const std::string l = std::to_string(i);
    return mso::forall("z" + l, mso::implies(mso::in("MAX" + l, "z" + l),
                                             mso::exists("w" + l, mso::land({mso::atom(pred::body(CtlOp::AX), {"w" + l, "z" + l}),
                                                                             mso::in(set_var(i - 1), "w" + l)}))));
}

} // namespace detail

/// Free set variable M{i}; level 0 is propositional consistency, level i > 0
/// adds EX branching and the AX step. Level i-1 is shared by both uses.
inline MsoFormula build_theta_assign(std::size_t i) {
    static std::mutex mu;
    static std::vector<MsoFormula> levels;
    std::lock_guard<std::mutex> lock(mu);
    while (levels.size() <= i) {
        using namespace mso;
        const std::size_t k = levels.size();
        const std::string l = std::to_string(k);
        const std::string m = detail::set_var(k), x = "x" + l;
        if (k == 0) {
            levels.push_back(forall(x, implies(atom(pred::kReprPL, {x}), detail::boolean_consistency(m, x, l))));
            continue;
        }
        const MsoFormula& lower = levels[k - 1];
        const std::string prev = detail::set_var(k - 1), max = "MAX" + l, y = "y" + l;
        const MsoFormula branch_ex =
            exists(y, land({atom(pred::body(CtlOp::EX), {y, x}),
                            exists_set(prev, land({in(prev, y), detail::ax_bodies_hold(k), lower}))}));
        const MsoFormula step_ax = exists_set(prev, land({detail::ax_bodies_hold(k), lower}));
        levels.push_back(land({
            forall(x, detail::boolean_consistency(m, x, l)),
            exists_set(max,
                       land({forall(x, iff(in(max, x), land({atom(pred::repr(CtlOp::AX), {x}), in(m, x)}))),
                             forall(x, implies(in(m, x), implies(atom(pred::repr(CtlOp::EX), {x}), branch_ex))),
                             implies(forall(x, implies(in(m, x), lnot(atom(pred::repr(CtlOp::EX), {x})))), step_ax)}),
                       m),
        }));
    }
    return levels[i];
}

/// theta_struc and exists M (repr element in M and theta_assign^td(M)).
inline MsoFormula build_theta(std::size_t td) {
    using namespace mso;
    const std::string m = detail::set_var(td);
    return land({build_theta_struc(),
                 exists_set(m, land({exists("r", land({atom(pred::kRepr, {"r"}), in(m, "r")})), build_theta_assign(td)}))});
}

/// Satisfiability of a CTL({AX, EX}) formula (after NNF) by evaluating
/// build_theta(td) on its structure.
inline bool fpt_pipeline(const Formula& f) {
    const Formula g = to_nnf(f);
    if (!operator_set(g).subset_of(CtlOperatorSet{CtlOp::AX, CtlOp::EX}))
        throw FragmentError("fpt_pipeline: " + operator_set(g).to_string() + " is not within {AX, EX} after NNF");
    return evaluate(encode(g), build_theta(temporal_depth(g)));
}

} // namespace ctlfrag
