#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit code:
//   0 success / true / satisfiable, 1 false / unsatisfiable / no,
//   2 usage or input error, 3 search budget exhausted.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/decomposition.hpp"
#include "ctlfrag/error.hpp"
#include "ctlfrag/kripke.hpp"
#include "ctlfrag/mso.hpp"
#include "ctlfrag/random_formula.hpp"
#include "ctlfrag/reductions.hpp"
#include "ctlfrag/sat_search.hpp"
#include "ctlfrag/structure.hpp"
#include "ctlfrag/theta.hpp"

namespace ctlfrag::cli {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitBudget = 3;

/// Human output prints results as prose and file formats; machine output
/// prints one key=value record per line.
class Report {
public:
    Report(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

    bool machine() const { return machine_; }
    std::ostream& stream() { return out_; }

    template <class T>
    void record(const std::string& key, const T& value) {
        if (machine_) out_ << key << '=' << value << '\n';
    }
    void text(const std::string& line) {
        if (!machine_) out_ << line << '\n';
    }

private:
    std::ostream& out_;
    bool machine_;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
auto with_file(const std::string& path, F&& read) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read(in);
}

// Formula text from the positional argument or from a file (lines starting
// with '#' are ignored).
inline Formula input_formula(const std::string& inline_text, const std::string& path) {
    if (!path.empty() && !inline_text.empty()) throw Error("give a formula or --file, not both");
    if (path.empty()) {
        if (inline_text.empty()) throw Error("no formula given");
        return parse_formula(inline_text);
    }
    std::istringstream in(read_file(path));
    std::string line, text;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') text += line + ' ';
    return parse_formula(text);
}

inline std::size_t default_world_bound(const Formula& f) {
    const Formula g = to_nnf(f);
    if (in_ax_ex_nnf(g)) return std::min(tree_model_world_bound(g), kMaxEnumeratedWorlds);
    return 3;
}

inline void print_model(Report& r, const KripkeStructure& k, std::size_t root) {
    if (r.machine()) {
        r.record("witness_worlds", k.world_count());
        r.record("witness_root", root);
        return;
    }
    write_kripke(r.stream(), k);
    r.text("# root " + std::to_string(root));
}

// "x=3" -> (x, 3); "X=1,2" -> (X, {1, 2})
inline std::pair<std::string, std::string> split_binding(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("binding must look like name=value: " + s);
    return {s.substr(0, eq), s.substr(eq + 1)};
}

inline std::size_t parse_index(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw Error("not an element index: " + s);
    }
    if (pos != s.size()) throw Error("not an element index: " + s);
    return static_cast<std::size_t>(v);
}

} // namespace detail

/// Parses and executes one command.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fragments of CTL: satisfiability, structures, decompositions and reductions", "ctlfrag"};
    app.require_subcommand(1);
    app.fallthrough();
    bool machine = false;
    std::uint64_t seed = 0;
    app.add_flag("--machine", machine, "Print key=value records");
    app.add_option("--seed", seed, "Seed for randomized commands")->envname("CTLFRAG_SEED");

    std::string formula_text, formula_file;
    auto formula_args = [&](CLI::App* sub) {
        sub->add_option("formula", formula_text, "CTL formula");
        sub->add_option("-f,--file", formula_file, "Read the formula from a file");
    };

    CLI::App* parse_cmd = app.add_subcommand("parse", "Parse and print a formula");
    formula_args(parse_cmd);
    CLI::App* nnf_cmd = app.add_subcommand("nnf", "Negation normal form");
    formula_args(nnf_cmd);
    CLI::App* td_cmd = app.add_subcommand("td", "Temporal depth");
    formula_args(td_cmd);

    CLI::App* encode_cmd = app.add_subcommand("encode", "Formula structure");
    formula_args(encode_cmd);
    bool gaifman = false;
    encode_cmd->add_flag("--gaifman", gaifman, "Print the Gaifman graph edges instead");

    CLI::App* decompose_cmd = app.add_subcommand("decompose", "Path decomposition of a formula structure");
    formula_args(decompose_cmd);
    std::string structure_file;
    bool exact = false, check = false;
    std::size_t element_limit = kDefaultExactElementLimit;
    decompose_cmd->add_option("-s,--structure", structure_file, "Read a structure instead of a formula");
    decompose_cmd->add_flag("--exact", exact, "Exact pathwidth by subset search");
    decompose_cmd->add_flag("--check", check, "Validate the decomposition");
    decompose_cmd->add_option("--limit", element_limit, "Element limit of the exact search")->check(CLI::PositiveNumber);

    CLI::App* param_cmd = app.add_subcommand("param", "Parameter pathwidth + temporal depth");
    formula_args(param_cmd);
    param_cmd->add_option("--limit", element_limit, "Element limit of the exact search")->check(CLI::PositiveNumber);

    CLI::App* sat_cmd = app.add_subcommand("sat", "Satisfiability");
    formula_args(sat_cmd);
    std::string method = "pipeline";
    std::size_t max_worlds = 0;
    std::uint64_t budget = std::uint64_t{1} << 28;
    bool witness = false;
    sat_cmd->add_option("-m,--method", method, "pipeline | tree | brute")
        ->check(CLI::IsMember({"pipeline", "tree", "brute"}));
    sat_cmd->add_option("--max-worlds", max_worlds, "World bound of the brute-force search")->check(CLI::PositiveNumber);
    sat_cmd->add_option("--budget", budget, "Candidate budget of the brute-force search")->check(CLI::PositiveNumber);
    sat_cmd->add_flag("--witness", witness, "Print a model");

    CLI::App* check_cmd = app.add_subcommand("check", "Model check a formula on a Kripke structure");
    formula_args(check_cmd);
    std::string kripke_file;
    std::size_t world = 0;
    check_cmd->add_option("-k,--kripke", kripke_file, "Kripke structure file")->required();
    check_cmd->add_option("-w,--world", world, "World to check");

    CLI::App* mso_cmd = app.add_subcommand("mso-eval", "Evaluate an MSO sentence on a structure");
    std::string mso_text, mso_file;
    std::vector<std::string> elem_bindings, set_bindings;
    mso_cmd->add_option("sentence", mso_text, "MSO formula (s-expression)");
    mso_cmd->add_option("--mso-file", mso_file, "Read the MSO formula from a file");
    mso_cmd->add_option("-s,--structure", structure_file, "Structure file");
    mso_cmd->add_option("--ctl", formula_text, "Use the structure of this CTL formula");
    mso_cmd->add_option("--elem", elem_bindings, "Element variable binding x=i");
    mso_cmd->add_option("--set", set_bindings, "Set variable binding X=i,j,...");

    CLI::App* theta_cmd = app.add_subcommand("theta", "The MSO sentence for a temporal depth");
    std::size_t theta_td = 0;
    bool theta_print = false;
    theta_cmd->add_option("td", theta_td, "Temporal depth")->required();
    theta_cmd->add_flag("--print", theta_print, "Print the sentence");

    std::string instance_file, variant_text = "ax-ag";
    auto variant_opt = [&](CLI::App* sub) {
        sub->add_option("-v,--variant", variant_text, "ax-ag | ax-eg | ag | au")
            ->check(CLI::IsMember({"ax-ag", "ax-eg", "ag", "au"}));
    };
    CLI::App* pwsat_cmd = app.add_subcommand("pwsat", "Solve a p-PW-SAT instance by enumeration");
    pwsat_cmd->add_option("instance", instance_file, "Instance file")->required();

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "Reduce a p-PW-SAT instance to CTL satisfiability");
    reduce_cmd->add_option("instance", instance_file, "Instance file")->required();
    variant_opt(reduce_cmd);
    reduce_cmd->add_flag("--witness", witness, "Also print the witness chain of a yes-instance");

    CLI::App* verify_cmd = app.add_subcommand("verify-reduction", "Check a reduction on one instance");
    verify_cmd->add_option("instance", instance_file, "Instance file")->required();
    bool all_variants = false;
    std::size_t world_bound = 3;
    std::uint64_t verify_budget = std::uint64_t{1} << 16;
    variant_opt(verify_cmd);
    verify_cmd->add_flag("--all", all_variants, "Check every variant");
    verify_cmd->add_option("--world-bound", world_bound, "Bounded search on no-instances (0 skips)");
    verify_cmd->add_option("--budget", verify_budget, "Candidate budget of the bounded search")->check(CLI::PositiveNumber);

    CLI::App* scan_cmd = app.add_subcommand("scan", "Parameter growth of a reduction over n");
    std::string family = "chain";
    std::size_t n_from = 2, n_to = 6;
    variant_opt(scan_cmd);
    scan_cmd->add_option("--family", family, "chain | trivial")->check(CLI::IsMember({"chain", "trivial"}));
    scan_cmd->add_option("--from", n_from, "Smallest n")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--to", n_to, "Largest n")->check(CLI::PositiveNumber);

    CLI::App* random_cmd = app.add_subcommand("random", "Random NNF CTL({AX,EX}) formulas");
    std::size_t count = 10;
    random_cmd->add_option("-n,--count", count, "Number of formulas");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitTrue : kExitError;
    }

    Report r(out, machine);
    auto verdict = [&](bool v, const std::string& yes, const std::string& no) {
        r.record("result", v ? yes : no);
        r.text(v ? yes : no);
        return v ? kExitTrue : kExitFalse;
    };

    try {
        auto formula = [&] { return detail::input_formula(formula_text, formula_file); };

        if (*parse_cmd) {
            const Formula f = formula();
            r.record("formula", f.to_string());
            r.record("size", f.size());
            r.record("subformulas", subformulas(f).size());
            r.record("operators", operator_set(f).to_string());
            r.text(f.to_string());
            return kExitTrue;
        }
        if (*nnf_cmd) {
            const Formula f = to_nnf(formula());
            r.record("nnf", f.to_string());
            r.text(f.to_string());
            return kExitTrue;
        }
        if (*td_cmd) {
            const std::size_t td = temporal_depth(formula());
            r.record("td", td);
            r.text(std::to_string(td));
            return kExitTrue;
        }
        if (*encode_cmd) {
            const RelationalStructure a = encode(eliminate_implications(formula()));
            const Graph g = gaifman_graph(a);
            r.record("elements", a.size());
            r.record("tuples", a.all_tuples().size());
            r.record("gaifman_edges", g.edge_count());
            if (!r.machine()) {
                if (gaifman)
                    for (const auto& [u, v] : g.edges())
                        out << "edge " << u << ' ' << v << "  # " << a.element_name(u) << " -- " << a.element_name(v) << '\n';
                else write_structure(out, a);
            }
            return kExitTrue;
        }
        if (*decompose_cmd) {
            RelationalStructure a;
            if (!structure_file.empty()) {
                if (!formula_text.empty() || !formula_file.empty()) throw Error("give a formula or --structure, not both");
                a = detail::with_file(structure_file, [](std::istream& in) { return read_structure(in); });
            } else {
                a = encode(eliminate_implications(formula()));
            }
            const PathDecompositionResult d = exact ? pathwidth_exact_decomposition(a, element_limit) : pathwidth_upper(a);
            r.record("elements", a.size());
            r.record("width", d.width);
            r.record("exact", exact ? "true" : "false");
            r.record("bags", d.decomposition.bags.size());
            r.text(std::string(exact ? "pathwidth " : "pathwidth <= ") + std::to_string(d.width));
            if (!r.machine()) write_decomposition(out, d.decomposition);
            if (check) {
                const auto violation = validate_decomposition(a, d.decomposition);
                r.record("valid", violation ? "false" : "true");
                r.text(violation ? "invalid: " + violation->message : "valid");
                if (violation) return kExitFalse;
            }
            return kExitTrue;
        }
        if (*param_cmd) {
            const FormulaParameter p = parameter(formula(), element_limit);
            r.record("pathwidth", p.pathwidth);
            r.record("pathwidth_exact", p.pathwidth_exact ? "true" : "false");
            r.record("td", p.temporal_depth);
            r.record("parameter", p.value());
            r.text("pathwidth " + std::string(p.pathwidth_exact ? "= " : "<= ") + std::to_string(p.pathwidth) +
                   ", td = " + std::to_string(p.temporal_depth) + ", parameter " +
                   (p.pathwidth_exact ? "= " : "<= ") + std::to_string(p.value()));
            return kExitTrue;
        }
        if (*sat_cmd) {
            const Formula f = formula();
            r.record("method", method);
            if (method == "pipeline") {
                const bool sat = fpt_pipeline(f);
                const int code = verdict(sat, "satisfiable", "unsatisfiable");
                if (sat && witness) {
                    const Formula g = to_nnf(f);
                    const auto m = bounded_tree_model(g, temporal_depth(g));
                    if (m) detail::print_model(r, m->structure, m->root);
                }
                return code;
            }
            if (method == "tree") {
                const Formula g = to_nnf(f);
                const auto m = bounded_tree_model(g, temporal_depth(g));
                const int code = verdict(m.has_value(), "satisfiable", "unsatisfiable");
                if (m && witness) detail::print_model(r, m->structure, m->root);
                return code;
            }
            const std::size_t bound = max_worlds ? max_worlds : detail::default_world_bound(f);
            BruteForceOptions opt;
            opt.budget = budget;
            const BruteForceResult res = brute_force_sat(f, bound, opt);
            r.record("result", to_string(res.status));
            r.record("max_worlds", bound);
            r.record("candidates", res.candidates);
            switch (res.status) {
            case SearchStatus::Satisfiable:
                r.text("satisfiable");
                if (witness) detail::print_model(r, *res.witness, res.witness_world);
                return kExitTrue;
            case SearchStatus::NoModelUpToBound:
                r.text("unsatisfiable up to " + std::to_string(bound) + " worlds");
                return kExitFalse;
            case SearchStatus::BudgetExhausted:
                r.text("budget exhausted after " + std::to_string(res.candidates) + " candidates");
                return kExitBudget;
            }
        }
        if (*check_cmd) {
            const KripkeStructure k = detail::with_file(kripke_file, [](std::istream& in) { return read_kripke(in); });
            if (auto v = validate(k)) throw Error("invalid Kripke structure: world " + std::to_string(v->world) + " " + v->reason);
            return verdict(model_check(k, world, formula()), "true", "false");
        }
        if (*mso_cmd) {
            if (mso_text.empty() == mso_file.empty()) throw Error("give an MSO formula or --mso-file");
            const MsoFormula phi = parse_mso(mso_text.empty() ? detail::read_file(mso_file) : mso_text);
            RelationalStructure a;
            if (structure_file.empty() == formula_text.empty()) throw Error("give --structure or --ctl");
            if (!structure_file.empty())
                a = detail::with_file(structure_file, [](std::istream& in) { return read_structure(in); });
            else a = encode(eliminate_implications(parse_formula(formula_text)));
            MsoAssignment asg;
            for (const auto& b : elem_bindings) {
                const auto [name, value] = detail::split_binding(b);
                asg.elements[name] = detail::parse_index(value);
            }
            for (const auto& b : set_bindings) {
                const auto [name, value] = detail::split_binding(b);
                std::set<std::size_t>& s = asg.sets[name];
                std::istringstream items(value);
                std::string item;
                while (std::getline(items, item, ','))
                    if (!item.empty()) s.insert(detail::parse_index(item));
            }
            return verdict(evaluate(a, phi, asg), "true", "false");
        }
        if (*theta_cmd) {
            const MsoFormula theta = build_theta(theta_td);
            r.record("td", theta_td);
            r.record("tree_size", theta.tree_size());
            r.record("dag_size", theta.dag_size());
            r.text("tree size " + std::to_string(theta.tree_size()) + ", shared size " + std::to_string(theta.dag_size()));
            if (theta_print && !r.machine()) out << theta.to_string() << '\n';
            return kExitTrue;
        }
        auto instance = [&] {
            return detail::with_file(instance_file, [](std::istream& in) { return read_instance(in); });
        };
        if (*pwsat_cmd) {
            const PwSatInstance inst = instance();
            const auto sol = pwsat_brute_force(inst);
            const int code = verdict(sol.has_value(), "yes", "no");
            if (sol) {
                std::string line;
                for (std::size_t i = 0; i < inst.n(); ++i) {
                    r.record(inst.variables[i], (*sol)[i] ? 1 : 0);
                    line += (i ? " " : "") + inst.variables[i] + "=" + ((*sol)[i] ? "1" : "0");
                }
                r.text(line);
            }
            return code;
        }
        if (*reduce_cmd) {
            const PwSatInstance inst = instance();
            const ReductionVariant v = parse_variant(variant_text);
            const Formula phi = reduce(inst, v);
            r.record("variant", to_string(v));
            r.record("operators", operator_set(phi).to_string());
            r.record("td", temporal_depth(phi));
            r.record("size", phi.size());
            r.record("formula", phi.to_string());
            r.text(phi.to_string());
            if (witness) {
                const auto sol = pwsat_brute_force(inst);
                if (!sol) {
                    r.record("witness", "none");
                    r.text("# no-instance: no witness");
                    return kExitFalse;
                }
                const RootedModel m = witness_model(inst, *sol, v);
                detail::print_model(r, m.structure, m.root);
            }
            return kExitTrue;
        }
        if (*verify_cmd) {
            const PwSatInstance inst = instance();
            std::vector<ReductionVariant> variants;
            if (all_variants) variants.assign(std::begin(kAllVariants), std::end(kAllVariants));
            else variants.push_back(parse_variant(variant_text));
            bool ok = true;
            for (const ReductionVariant v : variants) {
                const ReductionReport rep = verify_reduction(inst, v, world_bound, verify_budget);
                ok = ok && rep.passed();
                const std::string prefix = std::string(to_string(v)) + ".";
                r.record(prefix + "instance", rep.yes_instance ? "yes" : "no");
                r.record(prefix + "passed", rep.passed() ? "true" : "false");
                std::string line = std::string(to_string(v)) + ": " + (rep.yes_instance ? "yes-instance" : "no-instance");
                if (rep.yes_instance) {
                    r.record(prefix + "witness_ok", rep.soundness_ok ? "true" : "false");
                    line += rep.soundness_ok ? ", witness chain satisfies the reduction" : ", witness chain FAILS";
                } else {
                    r.record(prefix + "chains", rep.chains_checked);
                    r.record(prefix + "chain_failures", rep.chain_failures);
                    line += ", " + std::to_string(rep.chain_failures) + "/" + std::to_string(rep.chains_checked) +
                            " assignment chains satisfy the reduction";
                    if (rep.bounded) {
                        r.record(prefix + "bounded", to_string(rep.bounded->status));
                        line += ", bounded search: " + std::string(to_string(rep.bounded->status));
                    }
                }
                r.text(line + (rep.passed() ? " [ok]" : " [FAIL]"));
            }
            return ok ? kExitTrue : kExitFalse;
        }
        if (*scan_cmd) {
            const ReductionVariant v = parse_variant(variant_text);
            if (n_to < n_from) throw Error("--to must not be below --from");
            const auto rows = parameter_growth_scan(family == "chain" ? chain_family : trivial_family, v, n_from, n_to);
            r.text("n  td  pw<=  elements");
            for (const auto& row : rows) {
                const std::string key = "n" + std::to_string(row.n) + ".";
                r.record(key + "td", row.temporal_depth);
                r.record(key + "pathwidth_upper", row.pathwidth_upper);
                r.record(key + "elements", row.elements);
                r.text(std::to_string(row.n) + "  " + std::to_string(row.temporal_depth) + "  " +
                       std::to_string(row.pathwidth_upper) + "  " + std::to_string(row.elements));
            }
            return kExitTrue;
        }
        if (*random_cmd) {
            const auto suite = random_ax_ex_suite(seed, count);
            r.record("seed", seed);
            for (std::size_t i = 0; i < suite.size(); ++i) {
                r.record("f" + std::to_string(i), suite[i].to_string());
                r.text(suite[i].to_string());
            }
            return kExitTrue;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace ctlfrag::cli
