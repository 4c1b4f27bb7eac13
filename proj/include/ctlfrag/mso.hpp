#pragma once

// Monadic second-order logic over finite relational structures: an immutable
// AST (shared sub-DAGs allowed), a direct evaluator and an s-expression format.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ctlfrag/error.hpp"
#include "ctlfrag/structure.hpp"

namespace ctlfrag {

enum class MsoKind {
    True,
    False,
    Atom,    // P(x1, ..., xk)
    Equal,   // x = y
    Member,  // X(x)
    Not,
    And,
    Or,
    Implies,
    Iff,
    ExistsElem,
    ForallElem,
    ExistsSet,  // optionally bounded: exists X subset of Y
    ForallSet,
};

class MsoFormula;

namespace detail {
struct MsoNode {
    MsoKind kind = MsoKind::True;
    std::string name;               // predicate, set variable of Member, or quantified variable
    std::vector<std::string> vars;  // element arguments
    std::string bound;              // subset bound of a set quantifier ("" = none)
    std::vector<MsoFormula> children;
    std::vector<std::string> free_elements;
    std::vector<std::string> free_sets;
    bool has_set_quantifier = false;
};
} // namespace detail

class MsoFormula {
public:
    MsoFormula() : MsoFormula(truth()) {}

    static MsoFormula truth() {
        static const MsoFormula t = make(detail::MsoNode{});
        return t;
    }
    static MsoFormula falsity() {
        static const MsoFormula f = [] {
            detail::MsoNode n;
            n.kind = MsoKind::False;
            return make(std::move(n));
        }();
        return f;
    }
    static MsoFormula atom(std::string predicate, std::vector<std::string> vars) {
        if (vars.empty()) throw Error("atom " + predicate + " needs at least one argument");
        detail::MsoNode n;
        n.kind = MsoKind::Atom;
        n.name = std::move(predicate);
        n.vars = std::move(vars);
        return make(std::move(n));
    }
    static MsoFormula equal(std::string x, std::string y) {
        detail::MsoNode n;
        n.kind = MsoKind::Equal;
        n.vars = {std::move(x), std::move(y)};
        return make(std::move(n));
    }
    static MsoFormula member(std::string set, std::string x) {
        detail::MsoNode n;
        n.kind = MsoKind::Member;
        n.name = std::move(set);
        n.vars = {std::move(x)};
        return make(std::move(n));
    }
    static MsoFormula negation(MsoFormula f) { return connective(MsoKind::Not, {std::move(f)}); }
    static MsoFormula conjunction(std::vector<MsoFormula> fs) {
        if (fs.empty()) return truth();
        if (fs.size() == 1) return fs[0];
        return connective(MsoKind::And, std::move(fs));
    }
    static MsoFormula disjunction(std::vector<MsoFormula> fs) {
        if (fs.empty()) return falsity();
        if (fs.size() == 1) return fs[0];
        return connective(MsoKind::Or, std::move(fs));
    }
    static MsoFormula implication(MsoFormula a, MsoFormula b) {
        return connective(MsoKind::Implies, {std::move(a), std::move(b)});
    }
    static MsoFormula biconditional(MsoFormula a, MsoFormula b) {
        return connective(MsoKind::Iff, {std::move(a), std::move(b)});
    }
    static MsoFormula exists(std::string x, MsoFormula body) {
        return quantifier(MsoKind::ExistsElem, std::move(x), "", std::move(body));
    }
    static MsoFormula forall(std::string x, MsoFormula body) {
        return quantifier(MsoKind::ForallElem, std::move(x), "", std::move(body));
    }
    static MsoFormula exists_set(std::string set, MsoFormula body, std::string subset_of = "") {
        return quantifier(MsoKind::ExistsSet, std::move(set), std::move(subset_of), std::move(body));
    }
    static MsoFormula forall_set(std::string set, MsoFormula body, std::string subset_of = "") {
        return quantifier(MsoKind::ForallSet, std::move(set), std::move(subset_of), std::move(body));
    }

    MsoKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<std::string>& vars() const { return node_->vars; }
    const std::string& bound() const { return node_->bound; }
    const std::vector<MsoFormula>& children() const { return node_->children; }
    const MsoFormula& child(std::size_t i) const { return node_->children.at(i); }
    /// Sorted.
    const std::vector<std::string>& free_element_vars() const { return node_->free_elements; }
    const std::vector<std::string>& free_set_vars() const { return node_->free_sets; }
    bool has_set_quantifier() const { return node_->has_set_quantifier; }
    bool is_quantifier() const { return kind() >= MsoKind::ExistsElem; }

    /// Node identity; shared sub-DAGs have the same id.
    const void* id() const { return node_.get(); }

    /// Size of the formula written out as a tree.
    std::uint64_t tree_size() const {
        std::unordered_map<const void*, std::uint64_t> memo;
        return tree_size(memo);
    }

    /// Number of distinct nodes.
    std::size_t dag_size() const {
        std::unordered_set<const void*> seen;
        std::vector<const MsoFormula*> stack{this};
        while (!stack.empty()) {
            const MsoFormula* f = stack.back();
            stack.pop_back();
            if (!seen.insert(f->id()).second) continue;
            for (const auto& c : f->children()) stack.push_back(&c);
        }
        return seen.size();
    }

    /// Predicate symbols with the arity they are used at.
    std::map<std::string, std::size_t> predicates() const {
        std::map<std::string, std::size_t> out;
        std::unordered_set<const void*> seen;
        std::vector<const MsoFormula*> stack{this};
        while (!stack.empty()) {
            const MsoFormula* f = stack.back();
            stack.pop_back();
            if (!seen.insert(f->id()).second) continue;
            if (f->kind() == MsoKind::Atom) out.emplace(f->name(), f->vars().size());
            for (const auto& c : f->children()) stack.push_back(&c);
        }
        return out;
    }

    /// S-expression form.
    std::string to_string() const {
        std::string out;
        print(out);
        return out;
    }

private:
    explicit MsoFormula(std::shared_ptr<const detail::MsoNode> n) : node_(std::move(n)) {}

    static void insert_sorted(std::vector<std::string>& v, const std::string& s) {
        auto it = std::lower_bound(v.begin(), v.end(), s);
        if (it == v.end() || *it != s) v.insert(it, s);
    }
    static void erase_sorted(std::vector<std::string>& v, const std::string& s) {
        auto it = std::lower_bound(v.begin(), v.end(), s);
        if (it != v.end() && *it == s) v.erase(it);
    }
    static bool contains_sorted(const std::vector<std::string>& v, const std::string& s) {
        return std::binary_search(v.begin(), v.end(), s);
    }

    static void check_name(const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; }))
            throw Error("invalid MSO identifier '" + s + "'");
    }

    static MsoFormula make(detail::MsoNode n) {
        switch (n.kind) {
        case MsoKind::Atom:
            check_name(n.name);
            for (const auto& v : n.vars) check_name(v), insert_sorted(n.free_elements, v);
            break;
        case MsoKind::Equal:
            for (const auto& v : n.vars) check_name(v), insert_sorted(n.free_elements, v);
            break;
        case MsoKind::Member:
            check_name(n.name);
            check_name(n.vars[0]);
            insert_sorted(n.free_sets, n.name);
            insert_sorted(n.free_elements, n.vars[0]);
            break;
        default:
            for (const auto& c : n.children) {
                for (const auto& v : c.free_element_vars()) insert_sorted(n.free_elements, v);
                for (const auto& v : c.free_set_vars()) insert_sorted(n.free_sets, v);
                n.has_set_quantifier = n.has_set_quantifier || c.has_set_quantifier();
            }
            break;
        }
        if (n.kind >= MsoKind::ExistsElem) {
            check_name(n.name);
            const bool set_q = n.kind == MsoKind::ExistsSet || n.kind == MsoKind::ForallSet;
            const auto& other = set_q ? n.free_elements : n.free_sets;
            if (contains_sorted(other, n.name))
                throw Error("variable '" + n.name + "' used both as element and as set variable");
            erase_sorted(set_q ? n.free_sets : n.free_elements, n.name);
            if (set_q) {
                n.has_set_quantifier = true;
                if (!n.bound.empty()) {
                    check_name(n.bound);
                    if (n.bound == n.name) throw Error("set variable '" + n.name + "' bounded by itself");
                    insert_sorted(n.free_sets, n.bound);
                }
            }
        }
        for (const auto& v : n.free_elements)
            if (contains_sorted(n.free_sets, v))
                throw Error("variable '" + v + "' used both as element and as set variable");
        return MsoFormula{std::make_shared<const detail::MsoNode>(std::move(n))};
    }

    static MsoFormula connective(MsoKind kind, std::vector<MsoFormula> children) {
        detail::MsoNode n;
        n.kind = kind;
        n.children = std::move(children);
        return make(std::move(n));
    }

    static MsoFormula quantifier(MsoKind kind, std::string var, std::string bound, MsoFormula body) {
        detail::MsoNode n;
        n.kind = kind;
        n.name = std::move(var);
        n.bound = std::move(bound);
        n.children = {std::move(body)};
        return make(std::move(n));
    }

    std::uint64_t tree_size(std::unordered_map<const void*, std::uint64_t>& memo) const {
        if (auto it = memo.find(id()); it != memo.end()) return it->second;
        std::uint64_t s = 1;
        for (const auto& c : children()) s += c.tree_size(memo);
        memo.emplace(id(), s);
        return s;
    }

    void print(std::string& out) const {
        auto list = [&](const char* head) {
            out += '(';
            out += head;
            for (const auto& c : children()) {
                out += ' ';
                c.print(out);
            }
            out += ')';
        };
        switch (kind()) {
        case MsoKind::True: out += "true"; return;
        case MsoKind::False: out += "false"; return;
        case MsoKind::Atom:
            out += '(' + name();
            for (const auto& v : vars()) out += ' ' + v;
            out += ')';
            return;
        case MsoKind::Equal: out += "(= " + vars()[0] + ' ' + vars()[1] + ')'; return;
        case MsoKind::Member: out += "(in " + name() + ' ' + vars()[0] + ')'; return;
        case MsoKind::Not: list("not"); return;
        case MsoKind::And: list("and"); return;
        case MsoKind::Or: list("or"); return;
        case MsoKind::Implies: list("implies"); return;
        case MsoKind::Iff: list("iff"); return;
        case MsoKind::ExistsElem: out += "(exists " + name() + ' '; break;
        case MsoKind::ForallElem: out += "(forall " + name() + ' '; break;
        case MsoKind::ExistsSet:
        case MsoKind::ForallSet: {
            const bool ex = kind() == MsoKind::ExistsSet;
            if (bound().empty()) out += std::string(ex ? "(exists-set " : "(forall-set ") + name() + ' ';
            else out += std::string(ex ? "(exists-subset " : "(forall-subset ") + name() + ' ' + bound() + ' ';
            break;
        }
        }
        child(0).print(out);
        out += ')';
    }

    std::shared_ptr<const detail::MsoNode> node_;
};

/// Shorthand builders.
namespace mso {
inline MsoFormula top() { return MsoFormula::truth(); }
inline MsoFormula bottom() { return MsoFormula::falsity(); }
inline MsoFormula atom(std::string p, std::vector<std::string> xs) { return MsoFormula::atom(std::move(p), std::move(xs)); }
inline MsoFormula eq(std::string x, std::string y) { return MsoFormula::equal(std::move(x), std::move(y)); }
inline MsoFormula in(std::string set, std::string x) { return MsoFormula::member(std::move(set), std::move(x)); }
inline MsoFormula lnot(MsoFormula f) { return MsoFormula::negation(std::move(f)); }
inline MsoFormula land(std::vector<MsoFormula> fs) { return MsoFormula::conjunction(std::move(fs)); }
inline MsoFormula lor(std::vector<MsoFormula> fs) { return MsoFormula::disjunction(std::move(fs)); }
inline MsoFormula implies(MsoFormula a, MsoFormula b) { return MsoFormula::implication(std::move(a), std::move(b)); }
inline MsoFormula iff(MsoFormula a, MsoFormula b) { return MsoFormula::biconditional(std::move(a), std::move(b)); }
inline MsoFormula exists(std::string x, MsoFormula f) { return MsoFormula::exists(std::move(x), std::move(f)); }
inline MsoFormula forall(std::string x, MsoFormula f) { return MsoFormula::forall(std::move(x), std::move(f)); }
inline MsoFormula exists_set(std::string x, MsoFormula f, std::string bound = "") {
    return MsoFormula::exists_set(std::move(x), std::move(f), std::move(bound));
}
inline MsoFormula forall_set(std::string x, MsoFormula f, std::string bound = "") {
    return MsoFormula::forall_set(std::move(x), std::move(f), std::move(bound));
}
} // namespace mso

struct MsoAssignment {
    std::map<std::string, std::size_t> elements;
    std::map<std::string, std::set<std::size_t>> sets;
};

inline constexpr std::size_t kMaxMsoUniverse = 64;

namespace detail {

// Compiles a formula DAG against one structure and evaluates it. Variables
// are interned to slots; sets are 64-bit masks. Subformulas containing set
// quantifiers are memoized on the values of their free variables.
class MsoEvaluator {
public:
    MsoEvaluator(const RelationalStructure& a, const MsoFormula& f) : a_(a), n_(a.size()) {
        if (n_ > kMaxMsoUniverse)
            throw LimitError("MSO evaluation supports at most " + std::to_string(kMaxMsoUniverse) + " elements");
        universe_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
        root_ = compile(f);
    }

    bool run(const MsoAssignment& asg) {
        elem_.assign(elem_ids_.size(), 0);
        sets_.assign(set_ids_.size(), 0);
        for (const auto& [name, e] : asg.elements) {
            if (e >= n_) throw Error("assignment maps '" + name + "' outside the universe");
            if (auto it = elem_ids_.find(name); it != elem_ids_.end()) elem_[it->second] = e;
        }
        for (const auto& [name, s] : asg.sets) {
            std::uint64_t mask = 0;
            for (std::size_t e : s) {
                if (e >= n_) throw Error("assignment maps set '" + name + "' outside the universe");
                mask |= std::uint64_t{1} << e;
            }
            if (auto it = set_ids_.find(name); it != set_ids_.end()) sets_[it->second] = mask;
        }
        return eval(root_);
    }

private:
    struct Relation {
        std::size_t arity = 0;
        std::vector<Tuple> tuples;
        std::uint64_t unary = 0;
        std::vector<char> dense;  // row-major n^arity table when small enough
        const std::set<Tuple>* sparse = nullptr;
    };

    struct Node {
        MsoKind kind = MsoKind::True;
        int var = -1;    // quantified slot, or set slot of Member
        int bound = -1;  // subset bound slot
        std::vector<int> args;
        const Relation* rel = nullptr;
        std::vector<int> kids;
        std::vector<int> free_elem, free_set;
        bool memo = false;
        int guard = -1;      // node index of an atom that must hold for the quantified element
        int def_value = -1;  // node index of psi in a leading "forall v (X(v) <-> psi)"
        int def_var = -1;    // element slot v of that conjunct
        std::vector<int> required;  // element slots v with a conjunct X(v)
    };

    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& k) const {
            std::uint64_t h = 1469598103934665603ULL;
            for (auto v : k) h = (h ^ v) * 1099511628211ULL;
            return static_cast<std::size_t>(h);
        }
    };

    int slot(std::map<std::string, int>& ids, const std::string& name) {
        auto [it, inserted] = ids.emplace(name, static_cast<int>(ids.size()));
        return it->second;
    }

    const Relation* relation(const std::string& predicate, std::size_t arity) {
        if (!a_.vocabulary().contains(predicate)) throw Error("unknown predicate '" + predicate + "'");
        const std::size_t declared = a_.vocabulary().arity(predicate);
        if (declared != arity)
            throw Error("predicate " + predicate + " has arity " + std::to_string(declared) + ", used with " +
                        std::to_string(arity));
        auto [it, inserted] = relations_.try_emplace(predicate);
        Relation& r = it->second;
        if (!inserted) return &r;
        r.arity = arity;
        const auto& ts = a_.tuples(predicate);
        r.tuples.assign(ts.begin(), ts.end());
        if (arity == 1) {
            for (const auto& t : ts) r.unary |= std::uint64_t{1} << t[0];
            return &r;
        }
        std::size_t cells = 1;
        bool small = true;
        for (std::size_t i = 0; i < arity && small; ++i) {
            cells *= std::max<std::size_t>(n_, 1);
            small = cells <= (std::size_t{1} << 22);
        }
        if (small) {
            r.dense.assign(cells, 0);
            for (const auto& t : ts) r.dense[index(t.data(), arity)] = 1;
        } else {
            r.sparse = &ts;
        }
        return &r;
    }

    std::size_t index(const std::size_t* t, std::size_t arity) const {
        std::size_t i = 0;
        for (std::size_t j = 0; j < arity; ++j) i = i * n_ + t[j];
        return i;
    }

    static bool mentions(const MsoFormula& g, const std::string& v) {
        return std::binary_search(g.free_element_vars().begin(), g.free_element_vars().end(), v);
    }

    static bool is_guard_kind(MsoKind k) { return k == MsoKind::Atom || k == MsoKind::Member || k == MsoKind::Equal; }

    // An atomic conjunct of `f` mentioning `v`, if any.
    static const MsoFormula* find_guard(const MsoFormula& f, const std::string& v) {
        if (is_guard_kind(f.kind()) && mentions(f, v)) return &f;
        if (f.kind() == MsoKind::And)
            for (const auto& c : f.children())
                if (is_guard_kind(c.kind()) && mentions(c, v)) return &c;
        return nullptr;
    }

    int compile(const MsoFormula& f) {
        if (auto it = compiled_.find(f.id()); it != compiled_.end()) return it->second;
        Node nd;
        nd.kind = f.kind();
        nd.memo = f.has_set_quantifier();
        for (const auto& v : f.free_element_vars()) nd.free_elem.push_back(slot(elem_ids_, v));
        for (const auto& v : f.free_set_vars()) nd.free_set.push_back(slot(set_ids_, v));
        switch (f.kind()) {
        case MsoKind::Atom:
            nd.rel = relation(f.name(), f.vars().size());
            for (const auto& v : f.vars()) nd.args.push_back(slot(elem_ids_, v));
            break;
        case MsoKind::Equal:
            for (const auto& v : f.vars()) nd.args.push_back(slot(elem_ids_, v));
            break;
        case MsoKind::Member:
            nd.var = slot(set_ids_, f.name());
            nd.args.push_back(slot(elem_ids_, f.vars()[0]));
            break;
        case MsoKind::ExistsElem:
        case MsoKind::ForallElem: {
            nd.var = slot(elem_ids_, f.name());
            const MsoFormula& body = f.child(0);
            const MsoFormula* g = nullptr;
            if (f.kind() == MsoKind::ExistsElem) g = find_guard(body, f.name());
            else if (body.kind() == MsoKind::Implies) g = find_guard(body.child(0), f.name());
            if (g) nd.guard = compile(*g);
            break;
        }
        case MsoKind::ExistsSet:
        case MsoKind::ForallSet: {
            nd.var = slot(set_ids_, f.name());
            if (!f.bound().empty()) nd.bound = slot(set_ids_, f.bound());
            const MsoFormula& body = f.child(0);
            if (f.kind() == MsoKind::ExistsSet && body.kind() == MsoKind::And) {
                for (const auto& c : body.children())
                    if (c.kind() == MsoKind::Member && c.name() == f.name())
                        nd.required.push_back(slot(elem_ids_, c.vars()[0]));
                const MsoFormula& first = body.child(0);
                if (first.kind() == MsoKind::ForallElem && first.child(0).kind() == MsoKind::Iff) {
                    const MsoFormula& iff = first.child(0);
                    for (int side = 0; side < 2; ++side) {
                        const MsoFormula& m = iff.child(side);
                        const MsoFormula& psi = iff.child(1 - side);
                        const auto& psi_sets = psi.free_set_vars();
                        if (m.kind() == MsoKind::Member && m.name() == f.name() && m.vars()[0] == first.name() &&
                            !std::binary_search(psi_sets.begin(), psi_sets.end(), f.name())) {
                            nd.def_var = slot(elem_ids_, first.name());
                            nd.def_value = compile(psi);
                            break;
                        }
                    }
                }
            }
            break;
        }
        default: break;
        }
        for (const auto& c : f.children()) nd.kids.push_back(compile(c));
        nodes_.push_back(std::move(nd));
        caches_.emplace_back();
        const int idx = static_cast<int>(nodes_.size()) - 1;
        compiled_.emplace(f.id(), idx);
        return idx;
    }

    bool holds(const Relation& r, const std::vector<int>& args) const {
        if (r.arity == 1) return (r.unary >> elem_[args[0]]) & 1U;
        std::size_t t[8];
        std::vector<std::size_t> big;
        std::size_t* p = t;
        if (r.arity > 8) {
            big.resize(r.arity);
            p = big.data();
        }
        for (std::size_t j = 0; j < r.arity; ++j) p[j] = static_cast<std::size_t>(elem_[args[j]]);
        if (!r.dense.empty()) return r.dense[index(p, r.arity)] != 0;
        return r.sparse->count(Tuple(p, p + r.arity)) != 0;
    }

    // Elements e such that the guard may hold with slot `v` set to e.
    std::uint64_t candidates(const Node& g, int v) const {
        switch (g.kind) {
        case MsoKind::Member: return sets_[g.var];
        case MsoKind::Equal: {
            const int other = g.args[0] == v ? g.args[1] : g.args[0];
            if (other == v) return universe_;
            return std::uint64_t{1} << elem_[other];
        }
        case MsoKind::Atom: {
            std::uint64_t mask = 0;
            for (const auto& t : g.rel->tuples) {
                std::size_t value = n_;
                bool ok = true;
                for (std::size_t j = 0; j < t.size() && ok; ++j) {
                    if (g.args[j] == v) {
                        if (value == n_) value = t[j];
                        else ok = value == t[j];
                    } else {
                        ok = elem_[g.args[j]] == t[j];
                    }
                }
                if (ok && value < n_) mask |= std::uint64_t{1} << value;
            }
            return mask;
        }
        default: return universe_;
        }
    }

    bool eval(int idx) {
        Node& nd = nodes_[idx];
        if (!nd.memo) return compute(nd);
        std::vector<std::uint64_t> key;
        key.reserve(nd.free_elem.size() + nd.free_set.size());
        for (int v : nd.free_elem) key.push_back(elem_[v]);
        for (int v : nd.free_set) key.push_back(sets_[v]);
        auto& cache = caches_[idx];
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const bool r = compute(nodes_[idx]);
        caches_[idx].emplace(std::move(key), r);
        return r;
    }

    bool compute(const Node& nd) {
        switch (nd.kind) {
        case MsoKind::True: return true;
        case MsoKind::False: return false;
        case MsoKind::Atom: return holds(*nd.rel, nd.args);
        case MsoKind::Equal: return elem_[nd.args[0]] == elem_[nd.args[1]];
        case MsoKind::Member: return (sets_[nd.var] >> elem_[nd.args[0]]) & 1U;
        case MsoKind::Not: return !eval(nd.kids[0]);
        case MsoKind::And:
            for (int k : nd.kids)
                if (!eval(k)) return false;
            return true;
        case MsoKind::Or:
            for (int k : nd.kids)
                if (eval(k)) return true;
            return false;
        case MsoKind::Implies: return !eval(nd.kids[0]) || eval(nd.kids[1]);
        case MsoKind::Iff: return eval(nd.kids[0]) == eval(nd.kids[1]);
        case MsoKind::ExistsElem:
        case MsoKind::ForallElem: {
            const bool ex = nd.kind == MsoKind::ExistsElem;
            std::uint64_t dom = nd.guard >= 0 ? candidates(nodes_[nd.guard], nd.var) & universe_ : universe_;
            const std::uint64_t saved = elem_[nd.var];
            bool result = !ex;
            while (dom) {
                elem_[nd.var] = static_cast<std::uint64_t>(__builtin_ctzll(dom));
                dom &= dom - 1;
                if (eval(nd.kids[0]) == ex) {
                    result = ex;
                    break;
                }
            }
            elem_[nd.var] = saved;
            return result;
        }
        case MsoKind::ExistsSet:
        case MsoKind::ForallSet: {
            const bool ex = nd.kind == MsoKind::ExistsSet;
            const std::uint64_t dom = nd.bound >= 0 ? sets_[nd.bound] : universe_;
            const std::uint64_t saved = sets_[nd.var];
            bool result = !ex;
            if (ex && nd.def_value >= 0) {
                const std::uint64_t saved_elem = elem_[nd.def_var];
                std::uint64_t x = 0;
                for (std::size_t e = 0; e < n_; ++e) {
                    elem_[nd.def_var] = e;
                    if (eval(nd.def_value)) x |= std::uint64_t{1} << e;
                }
                elem_[nd.def_var] = saved_elem;
                if ((x & ~dom) == 0) {
                    sets_[nd.var] = x;
                    result = eval(nd.kids[0]);
                } else {
                    result = false;
                }
                sets_[nd.var] = saved;
                return result;
            }
            std::uint64_t required = 0;
            if (ex)
                for (int v : nd.required) required |= std::uint64_t{1} << elem_[v];
            if ((required & ~dom) != 0) return false;
            const std::uint64_t free = dom & ~required;
            for (std::uint64_t s = free;; s = (s - 1) & free) {
                sets_[nd.var] = s | required;
                if (eval(nd.kids[0]) == ex) {
                    result = ex;
                    break;
                }
                if (s == 0) break;
            }
            sets_[nd.var] = saved;
            return result;
        }
        }
        return false;
    }

    const RelationalStructure& a_;
    std::size_t n_;
    std::uint64_t universe_ = 0;
    std::map<std::string, int> elem_ids_, set_ids_;
    std::map<std::string, Relation> relations_;
    std::unordered_map<const void*, int> compiled_;
    std::vector<Node> nodes_;
    std::vector<std::unordered_map<std::vector<std::uint64_t>, bool, KeyHash>> caches_;
    std::vector<std::uint64_t> elem_, sets_;
    int root_ = -1;
};

} // namespace detail

/// Tarskian truth of `f` in `a` under `asg`. Element quantifiers range over
/// the universe, set quantifiers over all subsets (of the bound, if given).
inline bool evaluate(const RelationalStructure& a, const MsoFormula& f, const MsoAssignment& asg = {}) {
    for (const auto& v : f.free_element_vars())
        if (!asg.elements.count(v)) throw Error("unbound element variable '" + v + "'");
    for (const auto& v : f.free_set_vars())
        if (!asg.sets.count(v)) throw Error("unbound set variable '" + v + "'");
    detail::MsoEvaluator ev(a, f);
    return ev.run(asg);
}

// ---------------------------------------------------------------------------
// S-expression parser (inverse of MsoFormula::to_string).

namespace detail {

class SexprParser {
public:
    explicit SexprParser(const std::string& s) : s_(s) {}

    MsoFormula parse_all() {
        MsoFormula f = parse();
        skip();
        if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
        return f;
    }

private:
    void skip() {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            else if (s_[pos_] == ';') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else break;
        }
    }

    std::string word() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')' && s_[pos_] != ';')
            ++pos_;
        if (start == pos_) throw ParseError(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'"
                                                             : "unexpected end of input",
                                            start);
        return s_.substr(start, pos_ - start);
    }

    bool at_close() {
        skip();
        return pos_ < s_.size() && s_[pos_] == ')';
    }

    void expect_close() {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
    }

    MsoFormula parse() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const std::size_t start = pos_;
        if (s_[pos_] != '(') {
            const std::string w = word();
            if (w == "true") return MsoFormula::truth();
            if (w == "false") return MsoFormula::falsity();
            throw ParseError("expected '(' or true/false, got '" + w + "'", start);
        }
        ++pos_;
        const std::string head = word();
        try {
            MsoFormula f = form(head, start);
            expect_close();
            return f;
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), start);
        }
    }

    std::vector<MsoFormula> rest() {
        std::vector<MsoFormula> out;
        while (!at_close()) out.push_back(parse());
        return out;
    }

    MsoFormula form(const std::string& head, std::size_t start) {
        auto arity = [&](std::vector<MsoFormula> v, std::size_t n) {
            if (v.size() != n) throw ParseError("'" + head + "' takes " + std::to_string(n) + " operand(s)", start);
            return v;
        };
        if (head == "=") {
            std::string x = word(), y = word();
            return MsoFormula::equal(x, y);
        }
        if (head == "in") {
            std::string set = word(), x = word();
            return MsoFormula::member(set, x);
        }
        if (head == "not") return MsoFormula::negation(arity(rest(), 1)[0]);
        if (head == "and" || head == "or") {
            auto kids = rest();
            if (kids.size() < 2) throw ParseError("'" + head + "' takes at least 2 operands", start);
            return head == "and" ? MsoFormula::conjunction(std::move(kids)) : MsoFormula::disjunction(std::move(kids));
        }
        if (head == "implies" || head == "iff") {
            auto kids = arity(rest(), 2);
            return head == "implies" ? MsoFormula::implication(kids[0], kids[1])
                                     : MsoFormula::biconditional(kids[0], kids[1]);
        }
        if (head == "exists" || head == "forall") {
            std::string x = word();
            MsoFormula body = parse();
            return head == "exists" ? MsoFormula::exists(x, body) : MsoFormula::forall(x, body);
        }
        if (head == "exists-set" || head == "forall-set") {
            std::string x = word();
            MsoFormula body = parse();
            return head == "exists-set" ? MsoFormula::exists_set(x, body) : MsoFormula::forall_set(x, body);
        }
        if (head == "exists-subset" || head == "forall-subset") {
            std::string x = word(), bound = word();
            MsoFormula body = parse();
            return head == "exists-subset" ? MsoFormula::exists_set(x, body, bound)
                                           : MsoFormula::forall_set(x, body, bound);
        }
        std::vector<std::string> args;
        while (!at_close()) args.push_back(word());
        return MsoFormula::atom(head, std::move(args));
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the s-expression form; ';' starts a comment.
inline MsoFormula parse_mso(const std::string& text) { return detail::SexprParser(text).parse_all(); }

} // namespace ctlfrag
