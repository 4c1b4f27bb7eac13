// Acceptance suite: one PASS/FAIL line per criterion. With arguments, runs
// only the listed criteria; exits nonzero if any of them fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctlfrag.hpp"
#include "frozen.hpp"
#include "oracles.hpp"

using namespace ctlfrag;

namespace {

constexpr std::uint64_t kSuiteSeed = 20261019;
const char* kFig1 = "EX(AG(p & ~(EF z))) | ~(A[p U (EF z)])";

struct Outcome {
    bool pass = true;
    std::string detail;
};

const std::vector<Formula>& suite() {
    static const std::vector<Formula> s = [] {
        std::vector<Formula> out = random_ax_ex_suite(kSuiteSeed, 200);
        for (Formula& f : all_ax_ex_formulas(4)) out.push_back(std::move(f));
        return out;
    }();
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t disagreements = 0, satisfiable = 0, max_bound = 0;
    std::string first;
    for (const Formula& f : suite()) {
        const std::size_t bound = tree_model_world_bound(f);
        max_bound = std::max(max_bound, bound);
        BruteForceOptions o;
        o.budget = ~std::uint64_t{0};
        const BruteForceResult brute = brute_force_sat(f, bound, o);
        const bool pipeline = fpt_pipeline(f);
        const bool tree = bounded_tree_sat(f, temporal_depth(f));
        const bool agree = brute.status != SearchStatus::BudgetExhausted &&
                           pipeline == tree && tree == (brute.status == SearchStatus::Satisfiable);
        if (!agree && disagreements++ == 0) first = f.to_string();
        satisfiable += tree;
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << suite().size() << " formulas, " << satisfiable << " satisfiable, " << disagreements
      << " disagreements, brute-force bound <= " << max_bound << ", " << secs << " s";
    if (!first.empty()) d << ", first: " << first;
    return {disagreements == 0 && secs <= 600, d.str()};
}

Outcome tree_depth() {
    std::size_t checked = 0, bad = 0;
    for (const Formula& f : suite()) {
        const std::size_t td = temporal_depth(f);
        const auto m = bounded_tree_model(f, td);
        if (!m) continue;
        ++checked;
        if (m->depth > td || !model_check(m->structure, m->root, f)) ++bad;
    }
    std::mt19937_64 rng(kSuiteSeed);
    std::vector<std::size_t> idx(suite().size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        const Formula& f = suite()[idx[i]];
        const std::size_t td = temporal_depth(f);
        if (bounded_tree_sat(f, td) != bounded_tree_sat(f, td + 1)) ++changed;
    }
    std::ostringstream d;
    d << checked << " witnesses, " << bad << " deeper than td or not models; depth td+1 changed " << changed
      << " of 50 answers";
    return {bad == 0 && changed == 0, d.str()};
}

std::size_t root_of(const RelationalStructure& a) { return a.elements_with(pred::kRepr).at(0); }

// The Boolean connective at element `x`, if it is one.
std::optional<Kind> connective_of(const RelationalStructure& a, std::size_t x) {
    for (Kind k : {Kind::And, Kind::Or, Kind::Not})
        for (const Tuple& t : a.tuples(pred::conn(k, 1)))
            if (t.back() == x) return k;
    return std::nullopt;
}

Outcome struc_discrimination() {
    const MsoFormula theta = build_theta_struc();
    std::size_t accepted = 0;
    std::vector<RelationalStructure> dup, deleted, cyclic;
    for (const Formula& f : suite()) {
        const RelationalStructure a = encode(f);
        accepted += evaluate(a, theta);
        const std::size_t root = root_of(a);
        const std::size_t other = root == 0 ? 1 : 0;
        if (a.size() >= 2 && dup.size() < 10) {
            RelationalStructure m = a;
            m.add_tuple(pred::kRepr, {other});
            dup.push_back(std::move(m));
        }
        if (deleted.size() < 10)
            for (const auto& [name, t] : a.all_tuples())
                if (name.rfind("body_", 0) == 0) {
                    RelationalStructure m = a;
                    m.remove_tuple(name, t);
                    deleted.push_back(std::move(m));
                    break;
                }
        if (a.size() >= 2 && cyclic.size() < 10) {
            // A non-root element gains the root as an argument.
            RelationalStructure m = a;
            m.add_tuple(pred::conn(connective_of(a, other).value_or(Kind::Not), 1), {root, other});
            cyclic.push_back(std::move(m));
        }
    }
    std::size_t rejected = 0, mutated = 0;
    for (const auto* group : {&dup, &deleted, &cyclic})
        for (const RelationalStructure& m : *group) {
            ++mutated;
            rejected += !evaluate(m, theta);
        }
    std::ostringstream d;
    d << "accepted " << accepted << "/" << suite().size() << " encodings; rejected " << rejected << "/" << mutated
      << " mutations (" << dup.size() << " duplicate repr, " << deleted.size() << " deleted body, " << cyclic.size()
      << " cyclic conn)";
    return {accepted == suite().size() && mutated == 30 && rejected == 30, d.str()};
}

Outcome reduction_soundness() {
    std::size_t yes = 0, no = 0, failures = 0, no_model = 0, budget = 0;
    const auto instances = small_instances(3, 2);
    for (const PwSatInstance& inst : instances)
        for (ReductionVariant v : kAllVariants) {
            const ReductionReport r = verify_reduction(inst, v, 5);
            failures += !r.passed();
            if (r.yes_instance) {
                ++yes;
                continue;
            }
            ++no;
            if (r.bounded->status == SearchStatus::NoModelUpToBound) ++no_model;
            if (r.bounded->status == SearchStatus::BudgetExhausted) ++budget;
        }
    std::ostringstream d;
    d << instances.size() << " instances x 4 variants: " << yes << " yes checks, " << no
      << " no checks (bounded search: " << no_model << " no model, " << budget << " budget exhausted), " << failures
      << " failures";
    return {failures == 0, d.str()};
}

Outcome parameter_boundedness() {
    bool pass = true;
    std::ostringstream d;
    std::size_t td_axag = 0, td_axeg = 0;
    for (const frozen::ScanConstants& c : frozen::kScan) {
        const auto rows = parameter_growth_scan(chain_family, c.variant, 2, 6);
        bool constant = true;
        for (const ScanRow& r : rows) constant = constant && r.temporal_depth == c.temporal_depth;
        const std::size_t growth = rows.back().pathwidth_upper - std::min(rows.back().pathwidth_upper, rows.front().pathwidth_upper);
        const bool ok = constant && growth <= c.pathwidth_growth;
        if (c.variant == ReductionVariant::AxAg) td_axag = rows.front().temporal_depth;
        if (c.variant == ReductionVariant::AxEg) td_axeg = rows.front().temporal_depth;
        if (c.variant == ReductionVariant::AgOnly || c.variant == ReductionVariant::AuOnly) pass = pass && c.temporal_depth <= 4;
        pass = pass && ok;
        d << to_string(c.variant) << " td " << rows.front().temporal_depth << (constant ? "" : " (varies)") << " pw "
          << rows.front().pathwidth_upper << "->" << rows.back().pathwidth_upper << " (C " << c.pathwidth_growth << "); ";
    }
    pass = pass && td_axag == td_axeg;
    std::string s = d.str();
    s.resize(s.size() - 2);
    return {pass, s};
}

Outcome decomposition_correctness() {
    std::vector<RelationalStructure> corpus;
    for (const Formula& f : suite()) {
        RelationalStructure a = encode(f);
        if (a.size() <= 10) corpus.push_back(std::move(a));
    }
    for (const char* s : {kFig1, "A[p U q] | E[q U p]", "AG (p -> AF q)", "EF z & EG ~z & p"})
        corpus.push_back(encode(eliminate_implications(parse_formula(s))));
    std::mt19937_64 rng(kSuiteSeed);
    for (int i = 0; i < 100; ++i) corpus.push_back(oracle::random_structure(rng, 1 + rng() % 10, 5 + rng() % 40));
    std::size_t invalid = 0, order = 0, small = 0;
    for (const RelationalStructure& a : corpus) {
        const auto up = pathwidth_upper(a);
        const auto ex = pathwidth_exact_decomposition(a);
        invalid += validate_decomposition(a, up.decomposition).has_value();
        invalid += validate_decomposition(a, ex.decomposition).has_value();
        if (a.size() > 10) continue;
        ++small;
        if (up.width < ex.width || ex.width < oracle::treewidth_by_subsets(gaifman_graph(a))) ++order;
    }
    std::ostringstream d;
    d << corpus.size() << " structures: " << invalid << " invalid decompositions of " << 2 * corpus.size() << "; "
      << order << " of " << small << " small structures violate upper >= exact >= treewidth";
    return {invalid == 0 && order == 0, d.str()};
}

Outcome figure_regression() {
    const Formula f = parse_formula(kFig1);
    const RelationalStructure a = encode(f);
    const std::size_t edges = gaifman_graph(a).edge_count();
    auto count = [&](CtlOp op) { return a.tuples(pred::repr(op)).size(); };
    bool labels = count(CtlOp::EX) == 1 && count(CtlOp::AG) == 1 && count(CtlOp::EF) == 2 && count(CtlOp::AU) == 1;
    std::set<std::string> var_names;
    for (std::size_t e : a.elements_with(pred::kVar)) {
        var_names.insert(a.element_name(e));
        labels = labels && a.holds(pred::kReprPL, e);
    }
    labels = labels && var_names == std::set<std::string>{"p", "z"};
    const bool elements_ok = a.size() == 11, edges_ok = edges == 12, td_ok = temporal_depth(f) == 3;
    std::ostringstream d;
    d << "elements " << a.size() << (elements_ok ? " ok" : " (expected 11)") << ", Gaifman edges " << edges
      << (edges_ok ? " ok" : " (expected 12)") << ", td " << temporal_depth(f) << (td_ok ? " ok" : " (expected 3)")
      << ", labels " << (labels ? "ok" : "mismatch");
    return {elements_ok && edges_ok && td_ok && labels, d.str()};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", oracle_equivalence},
        {"tree-model depth", tree_depth},
        {"structure sentence discrimination", struc_discrimination},
        {"reduction soundness", reduction_soundness},
        {"parameter boundedness", parameter_boundedness},
        {"decomposition correctness", decomposition_correctness},
        {"figure regression", figure_regression},
    };
    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > static_cast<int>(criteria.size())) {
            std::cerr << "usage: acceptance [criterion 1-7 ...]\n";
            return 2;
        }
        selected.insert(static_cast<std::size_t>(c));
    }
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected.empty() && !selected.count(i + 1)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << o.detail
                  << std::endl;
    }
    return all ? 0 : 1;
}
