#pragma once

// Partitioned weighted satisfiability (p-PW-SAT) and its reductions to CTL
// satisfiability for the fragments {AX, AG}, {AX, AF} (via EG), {AG} and {AU}.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/decomposition.hpp"
#include "ctlfrag/error.hpp"
#include "ctlfrag/kripke.hpp"
#include "ctlfrag/sat_search.hpp"
#include "ctlfrag/structure.hpp"

namespace ctlfrag {

/// Propositions reserved for the reductions: tu{p}, fu{p}, tr{p}_{j},
/// fl{p}_{j}, d{i}, m0, m1.
inline bool is_reserved_name(const std::string& name) {
    static const std::regex reserved(R"(^((tu|fu|d)[0-9]+|(tr|fl)[0-9]+_[0-9]+|m[01])$)");
    return std::regex_match(name, reserved);
}

/// (F, part, tg). Variables are ordered as declared; parts are 1..k.
struct PwSatInstance {
    Formula formula = top();
    std::vector<std::string> variables;
    std::map<std::string, std::size_t> part;
    std::map<std::size_t, std::size_t> target;

    std::size_t n() const { return variables.size(); }
    std::size_t k() const { return target.size(); }

    /// n[p]
    std::size_t part_size(std::size_t p) const {
        std::size_t c = 0;
        for (const auto& v : variables)
            if (part.at(v) == p) ++c;
        return c;
    }

    std::size_t part_of(std::size_t i) const { return part.at(variables.at(i)); }

    void validate() const {
        if (!is_propositional(formula)) throw Error("p-PW-SAT formula must be propositional");
        std::set<std::string> declared(variables.begin(), variables.end());
        if (declared.size() != variables.size()) throw Error("duplicate variable declaration");
        for (const auto& q : propositions(formula))
            if (!declared.count(q)) throw Error("variable " + q + " has no part");
        for (const auto& q : variables) {
            if (is_reserved_name(q)) throw Error("variable name " + q + " collides with a reduction proposition");
            const std::size_t p = part.at(q);
            if (p < 1 || !target.count(p)) throw Error("variable " + q + " is in part " + std::to_string(p) + " without a target");
        }
        if (part.size() != variables.size()) throw Error("part map and variable list disagree");
        std::size_t expected = 1;
        for (const auto& [p, t] : target) {
            if (p != expected) throw Error("parts must be numbered 1..k; missing " + std::to_string(expected));
            ++expected;
            if (t > part_size(p))
                throw Error("target " + std::to_string(t) + " of part " + std::to_string(p) + " exceeds its " +
                            std::to_string(part_size(p)) + " variable(s)");
        }
    }
};

/// Builds and validates an instance; parts are 1-based.
inline PwSatInstance make_instance(Formula f, const std::vector<std::string>& variables,
                                   const std::vector<std::size_t>& parts, const std::vector<std::size_t>& targets) {
    if (parts.size() != variables.size()) throw Error("one part per variable expected");
    PwSatInstance inst;
    inst.formula = std::move(f);
    inst.variables = variables;
    for (std::size_t i = 0; i < variables.size(); ++i) inst.part[variables[i]] = parts[i];
    for (std::size_t p = 0; p < targets.size(); ++p) inst.target[p + 1] = targets[p];
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// Text format:
//   formula <expr>
//   part q1 1
//   tg 1 2

inline PwSatInstance read_instance(std::istream& in) {
    PwSatInstance inst;
    bool have_formula = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string cmd;
        if (!(ss >> cmd)) continue;
        if (cmd == "formula") {
            if (have_formula) throw ParseError("duplicate 'formula' line", lineno);
            std::string rest;
            std::getline(ss >> std::ws, rest);
            try {
                inst.formula = parse_formula(rest);
            } catch (const ParseError& e) {
                throw ParseError(std::string("formula: ") + e.what(), lineno);
            }
            have_formula = true;
        } else if (cmd == "part") {
            std::string q;
            long long p = 0;
            if (!(ss >> q >> p) || p < 1) throw ParseError("expected 'part VAR INDEX' with INDEX >= 1", lineno);
            if (!is_valid_proposition_name(q)) throw ParseError("bad variable name '" + q + "'", lineno);
            if (inst.part.count(q)) throw ParseError("variable " + q + " assigned twice", lineno);
            inst.variables.push_back(q);
            inst.part[q] = static_cast<std::size_t>(p);
        } else if (cmd == "tg") {
            long long p = 0, t = -1;
            if (!(ss >> p >> t) || p < 1 || t < 0) throw ParseError("expected 'tg PART TARGET'", lineno);
            if (!inst.target.emplace(static_cast<std::size_t>(p), static_cast<std::size_t>(t)).second)
                throw ParseError("target of part " + std::to_string(p) + " given twice", lineno);
        } else {
            throw ParseError("unknown directive '" + cmd + "'", lineno);
        }
    }
    if (!have_formula) throw ParseError("missing 'formula' line", lineno);
    inst.validate();
    return inst;
}

inline void write_instance(std::ostream& out, const PwSatInstance& inst) {
    out << "formula " << inst.formula.to_string() << '\n';
    for (const auto& q : inst.variables) out << "part " << q << ' ' << inst.part.at(q) << '\n';
    for (const auto& [p, t] : inst.target) out << "tg " << p << ' ' << t << '\n';
}

// ---------------------------------------------------------------------------
// Brute force.

inline constexpr std::size_t kMaxPwSatVariables = 20;

using Assignment = std::vector<bool>;  // indexed like PwSatInstance::variables

inline bool eval_propositional(const Formula& f, const std::map<std::string, bool>& values) {
    switch (f.kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Prop: {
        auto it = values.find(f.name());
        if (it == values.end()) throw Error("no value for variable " + f.name());
        return it->second;
    }
    case Kind::Not: return !eval_propositional(f.child(0), values);
    case Kind::And: return eval_propositional(f.child(0), values) && eval_propositional(f.child(1), values);
    case Kind::Or: return eval_propositional(f.child(0), values) || eval_propositional(f.child(1), values);
    case Kind::Implies: return !eval_propositional(f.child(0), values) || eval_propositional(f.child(1), values);
    case Kind::Iff: return eval_propositional(f.child(0), values) == eval_propositional(f.child(1), values);
    default: throw FragmentError("temporal operator in a propositional formula");
    }
}

/// F true under `asg` and every part p has exactly tg(p) true variables.
inline bool meets_instance(const PwSatInstance& inst, const Assignment& asg) {
    if (asg.size() != inst.n()) throw Error("assignment has the wrong number of variables");
    std::map<std::string, bool> values;
    std::map<std::size_t, std::size_t> ones;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        values[inst.variables[i]] = asg[i];
        if (asg[i]) ++ones[inst.part_of(i)];
    }
    for (const auto& [p, t] : inst.target)
        if (ones[p] != t) return false;
    return eval_propositional(inst.formula, values);
}

inline Assignment assignment_from_mask(std::size_t n, std::uint64_t mask) {
    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1U;
    return a;
}

/// First satisfying assignment in the order of masks 0..2^n-1 (bit i is the
/// i-th variable), or nullopt for a no-instance.
inline std::optional<Assignment> pwsat_brute_force(const PwSatInstance& inst) {
    if (inst.n() > kMaxPwSatVariables)
        throw LimitError("pwsat_brute_force: " + std::to_string(inst.n()) + " variables exceed the limit of " +
                         std::to_string(kMaxPwSatVariables));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n()); ++mask) {
        Assignment a = assignment_from_mask(inst.n(), mask);
        if (meets_instance(inst, a)) return a;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reductions.

enum class ReductionVariant { AxAg, AxEg, AgOnly, AuOnly };

inline constexpr ReductionVariant kAllVariants[] = {ReductionVariant::AxAg, ReductionVariant::AxEg,
                                                    ReductionVariant::AgOnly, ReductionVariant::AuOnly};

inline const char* to_string(ReductionVariant v) {
    switch (v) {
    case ReductionVariant::AxAg: return "ax-ag";
    case ReductionVariant::AxEg: return "ax-eg";
    case ReductionVariant::AgOnly: return "ag";
    case ReductionVariant::AuOnly: return "au";
    }
    return "?";
}

inline ReductionVariant parse_variant(const std::string& s) {
    for (ReductionVariant v : kAllVariants)
        if (s == to_string(v)) return v;
    throw Error("unknown reduction variant '" + s + "' (expected ax-ag, ax-eg, ag or au)");
}

/// Operators the variant's formulas are built from.
inline CtlOperatorSet variant_operators(ReductionVariant v) {
    switch (v) {
    case ReductionVariant::AxAg: return {CtlOp::AX, CtlOp::AG};
    case ReductionVariant::AxEg: return {CtlOp::AX, CtlOp::AF};
    case ReductionVariant::AgOnly: return {CtlOp::AG};
    case ReductionVariant::AuOnly: return {CtlOp::AU};
    }
    return {};
}

/// Number of chain worlds of the intended model.
inline std::size_t chain_length(const PwSatInstance& inst, ReductionVariant v) {
    return inst.n() + (v == ReductionVariant::AxAg || v == ReductionVariant::AxEg ? 2 : 3);
}

namespace detail {

inline Formula d(std::size_t i) { return prop("d" + std::to_string(i)); }
inline Formula tu(std::size_t p) { return prop("tu" + std::to_string(p)); }
inline Formula fu(std::size_t p) { return prop("fu" + std::to_string(p)); }
inline Formula tr(std::size_t p, std::size_t j) { return prop("tr" + std::to_string(p) + "_" + std::to_string(j)); }
inline Formula fl(std::size_t p, std::size_t j) { return prop("fl" + std::to_string(p) + "_" + std::to_string(j)); }
inline Formula m(std::size_t b) { return prop("m" + std::to_string(b)); }
inline Formula level(std::size_t i) { return land(d(i), lnot(d(i + 1))); }

struct ReductionParts {
    Formula determined, depth, set_counter, inc_counter, target_met, count_init;
    std::vector<Formula> monotone;
};

// Bodies shared by several variants (the part under the outer AG, if any).
inline Formula set_counter_body(const PwSatInstance& inst, std::size_t i) {
    const Formula q = prop(inst.variables[i - 1]);
    const std::size_t p = inst.part_of(i - 1);
    return implies(level(i), land(implies(q, tu(p)), implies(lnot(q), fu(p))));
}

inline Formula target_body(const PwSatInstance& inst, std::size_t p) {
    const std::size_t n = inst.n(), np = inst.part_size(p), t = inst.target.at(p);
    return implies(d(n + 1), conjoin({tr(p, t), lnot(tr(p, t + 1)), fl(p, np - t), lnot(fl(p, np - t + 1))}));
}

inline Formula monotone_body(const PwSatInstance& inst, std::size_t first_depth, std::size_t last_depth,
                             std::size_t first_counter, std::size_t extra) {
    std::vector<Formula> parts;
    for (std::size_t i = first_depth; i <= last_depth; ++i) parts.push_back(implies(d(i), d(i - 1)));
    for (const auto& [p, t] : inst.target) {
        (void)t;
        for (std::size_t j = first_counter; j <= inst.part_size(p) + extra; ++j) {
            parts.push_back(implies(tr(p, j), tr(p, j - 1)));
            parts.push_back(implies(fl(p, j), fl(p, j - 1)));
        }
    }
    return conjoin(parts);
}

// AG-based parts for {AX, AG}. With `ax_persistence`, the inner "AG tr" of
// countMonotone1 becomes "AX tr" so the body stays inside CTL({AX}).
inline std::vector<Formula> ax_ag_bodies(const PwSatInstance& inst, bool ax_persistence) {
    const std::size_t n = inst.n();
    std::vector<Formula> determined, depth, set_counter, inc, target, init, mono1;
    for (std::size_t i = 1; i <= n; ++i) {
        const Formula q = prop(inst.variables[i - 1]);
        determined.push_back(land(implies(q, AX(q)), implies(lnot(q), AX(lnot(q)))));
    }
    for (std::size_t i = 0; i <= n; ++i) depth.push_back(implies(level(i), AX(level(i + 1))));
    for (std::size_t i = 1; i <= n; ++i) set_counter.push_back(set_counter_body(inst, i));
    for (const auto& [p, t] : inst.target) {
        (void)t;
        const std::size_t np = inst.part_size(p);
        for (std::size_t j = 0; j <= np; ++j)
            inc.push_back(land(implies(tu(p), implies(tr(p, j), AX(tr(p, j + 1)))),
                               implies(fu(p), implies(fl(p, j), AX(fl(p, j + 1))))));
        target.push_back(target_body(inst, p));
        init.push_back(land(tr(p, 0), fl(p, 0)));
        for (std::size_t j = 0; j <= np; ++j) {
            auto keep = [&](const Formula& c) { return implies(c, ax_persistence ? AX(c) : AG(c)); };
            mono1.push_back(land(keep(tr(p, j)), keep(fl(p, j))));
        }
    }
    return {conjoin(determined), conjoin(depth), conjoin(set_counter), conjoin(inc),
            conjoin(target),     conjoin(init),  conjoin(mono1),       monotone_body(inst, 1, n + 2, 1, 1)};
}

inline Formula reduce_ax_ag(const PwSatInstance& inst) {
    const auto b = ax_ag_bodies(inst, false);
    const Formula determined = AG(b[0]);
    const Formula depth = AG(b[1]);
    const Formula set_counter = AG(b[2]);
    const Formula inc_counter = AG(b[3]);
    const Formula target_met = AG(b[4]);
    const Formula count_init = conjoin({d(0), lnot(d(1)), AG(b[5])});
    const Formula monotone1 = AG(b[6]);
    const Formula monotone2 = AG(b[7]);
    return conjoin({inst.formula, determined, depth, set_counter, inc_counter, target_met, count_init, monotone1,
                    monotone2});
}

// psi and not AF not chi, where EG chi is the merged AG of the {AX, AG} case.
inline Formula reduce_ax_eg(const PwSatInstance& inst) {
    const auto b = ax_ag_bodies(inst, true);
    const Formula psi = conjoin({inst.formula, d(0), lnot(d(1))});
    const Formula chi = conjoin(b);
    return land(psi, lnot(AF(lnot(chi))));
}

inline Formula ef_as_ag(const Formula& f) { return lnot(AG(lnot(f))); }

inline Formula reduce_ag_only(const PwSatInstance& inst) {
    const std::size_t n = inst.n();
    std::vector<Formula> determined, depth, set_counter, inc, target, init, mono1;
    for (std::size_t i = 1; i <= n; ++i) {
        const Formula q = prop(inst.variables[i - 1]);
        determined.push_back(land(implies(q, AG(q)), implies(lnot(q), AG(lnot(q)))));
    }
    for (std::size_t i = 0; i <= n; ++i)
        depth.push_back(implies(level(i), conjoin({m(i % 2), lnot(m(1 - i % 2)), ef_as_ag(level(i + 1))})));
    for (std::size_t i = 1; i <= n; ++i) set_counter.push_back(set_counter_body(inst, i));
    for (const auto& [p, t] : inst.target) {
        (void)t;
        const std::size_t np = inst.part_size(p);
        for (std::size_t j = 0; j + 1 <= np; ++j)
            for (std::size_t b = 0; b <= 1; ++b) {
                inc.push_back(implies(conjoin({tu(p), tr(p, j), m(b)}), AG(implies(m(1 - b), AG(tr(p, j + 1))))));
                inc.push_back(implies(conjoin({fu(p), fl(p, j), m(b)}), AG(implies(m(1 - b), AG(fl(p, j + 1))))));
            }
        target.push_back(target_body(inst, p));
        init.push_back(land(tr(p, 0), fl(p, 0)));
        for (std::size_t j = 0; j <= np; ++j)
            mono1.push_back(land(implies(tr(p, j), AG(tr(p, j))), implies(fl(p, j), AG(fl(p, j)))));
    }
    return conjoin({inst.formula, conjoin(determined), AG(conjoin(depth)), AG(conjoin(set_counter)),
                    AG(conjoin(inc)), AG(conjoin(target)), conjoin({d(0), lnot(d(1)), AG(conjoin(init))}),
                    AG(conjoin(mono1)), AG(monotone_body(inst, 1, n + 2, 1, 1))});
}

inline Formula reduce_au_only(const PwSatInstance& inst) {
    const std::size_t n = inst.n();
    const Formula end = d(n + 2);
    auto until_end = [&](const Formula& f) { return AU(f, end); };
    std::vector<Formula> parts{inst.formula};
    std::vector<Formula> determined;
    for (std::size_t i = 1; i <= n; ++i) determined.push_back(implies(prop(inst.variables[i - 1]), until_end(prop(inst.variables[i - 1]))));
    for (std::size_t i = 1; i <= n; ++i)
        determined.push_back(implies(lnot(prop(inst.variables[i - 1])), until_end(lnot(prop(inst.variables[i - 1])))));
    parts.push_back(conjoin(determined));
    std::vector<Formula> depth;
    for (std::size_t i = 0; i <= n; ++i)
        depth.push_back(until_end(implies(
            level(i), conjoin({m(i % 2), lnot(m(1 - i % 2)), AU(lnot(end), conjoin({d(i + 1), lnot(d(i + 2)), lnot(end)}))}))));
    parts.push_back(conjoin(depth));
    std::vector<Formula> set_counter;
    for (std::size_t i = 1; i <= n; ++i) set_counter.push_back(until_end(set_counter_body(inst, i)));
    parts.push_back(conjoin(set_counter));
    std::vector<Formula> inc, target, init;
    for (const auto& [p, t] : inst.target) {
        (void)t;
        const std::size_t np = inst.part_size(p);
        for (std::size_t j = 0; j + 1 <= np; ++j)
            for (std::size_t b = 0; b <= 1; ++b)
                inc.push_back(until_end(
                    land(implies(conjoin({tu(p), tr(p, j), m(b)}), AU(m(b), until_end(tr(p, j + 1)))),
                         implies(conjoin({fu(p), fl(p, j), m(b)}), AU(m(b), until_end(fl(p, j + 1)))))));
        target.push_back(until_end(target_body(inst, p)));
        init.push_back(conjoin({lnot(tr(p, 1)), lnot(fl(p, 1)), until_end(land(tr(p, 0), fl(p, 0)))}));
    }
    parts.push_back(conjoin(inc));
    parts.push_back(conjoin(target));
    // The root must not be the end world, or every A[f U end] holds at once.
    parts.push_back(conjoin({d(0), lnot(d(1)), lnot(end), conjoin(init)}));
    std::vector<Formula> monotone;
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<Formula> body{implies(d(i), d(i - 1))};
        for (const auto& [p, t] : inst.target) {
            (void)t;
            for (std::size_t j = 2; j <= inst.part_size(p); ++j) {
                body.push_back(implies(tr(p, j), tr(p, j - 1)));
                body.push_back(implies(fl(p, j), fl(p, j - 1)));
            }
        }
        monotone.push_back(until_end(conjoin(body)));
    }
    parts.push_back(conjoin(monotone));
    return conjoin(parts);
}

} // namespace detail

/// phi_F: F conjoined with the variant's subformulas.
inline Formula reduce(const PwSatInstance& inst, ReductionVariant v) {
    inst.validate();
    switch (v) {
    case ReductionVariant::AxAg: return detail::reduce_ax_ag(inst);
    case ReductionVariant::AxEg: return detail::reduce_ax_eg(inst);
    case ReductionVariant::AgOnly: return detail::reduce_ag_only(inst);
    case ReductionVariant::AuOnly: return detail::reduce_au_only(inst);
    }
    throw Error("unknown variant");
}

struct RootedModel {
    KripkeStructure structure;
    std::size_t root = 0;
};

/// The chain model induced by `asg`, whether or not it meets the instance:
/// world t carries the assignment, d_0..d_t, the parity bit (AG/AU only),
/// the part flag of variable t, and counters of the true and false
/// variables among the first t-1. The last world loops on itself.
inline RootedModel assignment_chain(const PwSatInstance& inst, const Assignment& asg, ReductionVariant v) {
    if (asg.size() != inst.n()) throw Error("assignment has the wrong number of variables");
    const std::size_t n = inst.n(), len = chain_length(inst, v);
    const bool parity = v == ReductionVariant::AgOnly || v == ReductionVariant::AuOnly;
    RootedModel out{KripkeStructure(len), 0};
    KripkeStructure& k = out.structure;
    for (const auto& p : propositions(reduce(inst, v))) k.declare_proposition(p);
    for (std::size_t t = 0; t + 1 < len; ++t) k.add_edge(t, t + 1);
    k.add_edge(len - 1, len - 1);
    std::map<std::size_t, std::size_t> ones, zeros;
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            if (asg[i]) k.label(t, inst.variables[i]);
        for (std::size_t i = 0; i <= std::min(t, n + 2); ++i) k.label(t, "d" + std::to_string(i));
        if (parity) k.label(t, "m" + std::to_string(t % 2));
        for (const auto& [p, tg] : inst.target) {
            (void)tg;
            for (std::size_t j = 0; j <= std::min(ones[p], inst.part_size(p)); ++j)
                k.label(t, "tr" + std::to_string(p) + "_" + std::to_string(j));
            for (std::size_t j = 0; j <= std::min(zeros[p], inst.part_size(p)); ++j)
                k.label(t, "fl" + std::to_string(p) + "_" + std::to_string(j));
        }
        if (t >= 1 && t <= n) {
            const std::size_t p = inst.part_of(t - 1);
            if (asg[t - 1]) {
                k.label(t, "tu" + std::to_string(p));
                ++ones[p];
            } else {
                k.label(t, "fu" + std::to_string(p));
                ++zeros[p];
            }
        }
    }
    return out;
}

/// The intended model of reduce(inst, v) for a solution `asg`.
inline RootedModel witness_model(const PwSatInstance& inst, const Assignment& asg, ReductionVariant v) {
    if (!meets_instance(inst, asg)) throw Error("witness_model: assignment does not solve the instance");
    return assignment_chain(inst, asg, v);
}

struct ReductionReport {
    bool yes_instance = false;
    bool soundness_ok = true;        // yes: the witness satisfies phi_F
    std::size_t chains_checked = 0;  // no: assignment chains tried
    std::size_t chain_failures = 0;  // no: chains that satisfy phi_F
    std::optional<BruteForceResult> bounded;  // no: bounded search (partial evidence)
    bool passed() const {
        if (yes_instance) return soundness_ok;
        return chain_failures == 0 && (!bounded || bounded->status != SearchStatus::Satisfiable);
    }
};

/// Checks reduce(inst, v) on one instance: soundness via the witness chain
/// on yes-instances; on no-instances, that no assignment chain is a model
/// and that bounded search finds none either (or runs out of budget).
inline ReductionReport verify_reduction(const PwSatInstance& inst, ReductionVariant v, std::size_t world_bound,
                                        std::uint64_t budget = std::uint64_t{1} << 16) {
    const Formula phi = reduce(inst, v);
    ReductionReport r;
    const auto solution = pwsat_brute_force(inst);
    r.yes_instance = solution.has_value();
    if (r.yes_instance) {
        const RootedModel w = witness_model(inst, *solution, v);
        r.soundness_ok = model_check(w.structure, w.root, phi);
        return r;
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n()); ++mask) {
        const RootedModel c = assignment_chain(inst, assignment_from_mask(inst.n(), mask), v);
        ++r.chains_checked;
        if (model_check(c.structure, c.root, phi)) ++r.chain_failures;
    }
    if (world_bound > 0) {
        BruteForceOptions opt;
        opt.budget = budget;
        r.bounded = brute_force_sat(phi, world_bound, opt);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Parameter scan.

/// k = 1, F = (x1 | x2) & (x2 | x3) & ..., target floor(n/2).
inline PwSatInstance chain_family(std::size_t n) {
    if (n == 0) throw Error("chain_family needs n >= 1");
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    std::vector<Formula> clauses;
    for (std::size_t i = 0; i + 1 < n; ++i) clauses.push_back(lor(prop(vars[i]), prop(vars[i + 1])));
    Formula f = n == 1 ? prop(vars[0]) : conjoin(clauses);
    return make_instance(f, vars, std::vector<std::size_t>(n, 1), {n / 2});
}

/// k = 1, F = true over n unconstrained variables.
inline PwSatInstance trivial_family(std::size_t n) {
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    return make_instance(top(), vars, std::vector<std::size_t>(n, 1), {0});
}

/// Every instance over x1..xn (n <= max_n) with k <= min(max_k, n) nonempty
/// parts and every target vector, for four formula shapes: the conjunction
/// and the disjunction of all variables, x1 xor xn, and true.
inline std::vector<PwSatInstance> small_instances(std::size_t max_n, std::size_t max_k) {
    if (max_k > 2) throw LimitError("small_instances: at most two parts");
    std::vector<PwSatInstance> out;
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<std::string> vars;
        std::vector<Formula> props;
        for (std::size_t i = 1; i <= n; ++i) {
            vars.push_back("x" + std::to_string(i));
            props.push_back(prop(vars.back()));
        }
        const Formula shapes[] = {conjoin(props), disjoin(props),
                                  lor(land(props.front(), lnot(props.back())), land(lnot(props.front()), props.back())),
                                  top()};
        for (const Formula& f : shapes)
            for (std::size_t k = 1; k <= std::min(max_k, n); ++k)
                for (std::uint64_t colouring = 0; colouring < (k == 1 ? 1U : (std::uint64_t{1} << n)); ++colouring) {
                    std::vector<std::size_t> parts(n);
                    std::size_t size[3] = {0, 0, 0};
                    for (std::size_t i = 0; i < n; ++i) ++size[parts[i] = 1 + ((colouring >> i) & 1U)];
                    if (k == 2 && (size[1] == 0 || size[2] == 0)) continue;
                    for (std::size_t t1 = 0; t1 <= size[1]; ++t1)
                        for (std::size_t t2 = 0; t2 <= (k == 2 ? size[2] : 0); ++t2) {
                            std::vector<std::size_t> targets{t1};
                            if (k == 2) targets.push_back(t2);
                            out.push_back(make_instance(f, vars, parts, targets));
                        }
                }
    }
    return out;
}

struct ScanRow {
    std::size_t n = 0;
    std::size_t temporal_depth = 0;
    std::size_t pathwidth_upper = 0;
    std::size_t elements = 0;
};

inline std::vector<ScanRow> parameter_growth_scan(const std::function<PwSatInstance(std::size_t)>& family,
                                                  ReductionVariant v, std::size_t n_from, std::size_t n_to) {
    std::vector<ScanRow> rows;
    for (std::size_t n = n_from; n <= n_to; ++n) {
        const Formula phi = reduce(family(n), v);
        const RelationalStructure a = encode(eliminate_implications(phi));
        rows.push_back({n, temporal_depth(phi), pathwidth_upper(a).width, a.size()});
    }
    return rows;
}

} // namespace ctlfrag
