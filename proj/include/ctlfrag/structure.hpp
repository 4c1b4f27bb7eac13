#pragma once

// Relational structures over the CTL vocabulary and the formula encoding
// A_phi: one element per compound subformula occurrence, shared leaves for
// propositions and constants.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/error.hpp"

namespace ctlfrag {

using Tuple = std::vector<std::size_t>;

/// Predicate symbols with arities.
class Vocabulary {
public:
    void add(const std::string& name, std::size_t arity) {
        if (arity == 0) throw Error("predicate " + name + " needs arity >= 1");
        auto [it, inserted] = arity_.emplace(name, arity);
        if (!inserted && it->second != arity)
            throw Error("predicate " + name + " redeclared with arity " + std::to_string(arity));
        if (inserted) order_.push_back(name);
    }

    bool contains(const std::string& name) const { return arity_.count(name) != 0; }

    std::size_t arity(const std::string& name) const {
        auto it = arity_.find(name);
        if (it == arity_.end()) throw Error("unknown predicate '" + name + "'");
        return it->second;
    }

    /// Declaration order.
    const std::vector<std::string>& names() const { return order_; }

private:
    std::map<std::string, std::size_t> arity_;
    std::vector<std::string> order_;
};

namespace pred {
inline constexpr const char* kConstTrue = "const_true";
inline constexpr const char* kConstFalse = "const_false";
inline constexpr const char* kVar = "var";
inline constexpr const char* kRepr = "repr";
inline constexpr const char* kReprPL = "reprPL";

inline std::string conn(Kind connective, std::size_t position) {
    switch (connective) {
    case Kind::And: return "conn_and_" + std::to_string(position);
    case Kind::Or: return "conn_or_" + std::to_string(position);
    case Kind::Not: return "conn_not_" + std::to_string(position);
    default: throw Error("no conn predicate for this connective");
    }
}
inline std::string repr(CtlOp op) { return "repr_" + std::string(op_name(op)); }
inline std::string body(CtlOp op) { return "body_" + std::string(op_name(op)); }
} // namespace pred

/// The vocabulary tau of formula structures over the basis {and, or, not}.
inline const Vocabulary& ctl_vocabulary() {
    static const Vocabulary vocab = [] {
        Vocabulary v;
        v.add(pred::kConstTrue, 1);
        v.add(pred::kConstFalse, 1);
        v.add(pred::conn(Kind::And, 1), 2);
        v.add(pred::conn(Kind::And, 2), 2);
        v.add(pred::conn(Kind::Or, 1), 2);
        v.add(pred::conn(Kind::Or, 2), 2);
        v.add(pred::conn(Kind::Not, 1), 2);
        v.add(pred::kVar, 1);
        v.add(pred::kRepr, 1);
        v.add(pred::kReprPL, 1);
        for (CtlOp op : kAllCtlOps) {
            v.add(pred::repr(op), 1);
            v.add(pred::body(op), is_binary_op(op) ? 3 : 2);
        }
        return v;
    }();
    return vocab;
}

/// Universe 0..n-1 with named elements and set-valued relations.
class RelationalStructure {
public:
    explicit RelationalStructure(Vocabulary vocabulary = ctl_vocabulary()) : vocab_(std::move(vocabulary)) {}

    const Vocabulary& vocabulary() const { return vocab_; }
    std::size_t size() const { return names_.size(); }

    std::size_t add_element(std::string name) {
        names_.push_back(std::move(name));
        return names_.size() - 1;
    }

    const std::string& element_name(std::size_t e) const { return names_.at(e); }
    void rename_element(std::size_t e, std::string name) { names_.at(e) = std::move(name); }

    /// Declares a predicate absent from the vocabulary.
    void declare(const std::string& predicate, std::size_t arity) { vocab_.add(predicate, arity); }

    /// Returns false if the tuple was already present.
    bool add_tuple(const std::string& predicate, Tuple t) {
        check_tuple(predicate, t);
        return relations_[predicate].insert(std::move(t)).second;
    }

    bool remove_tuple(const std::string& predicate, const Tuple& t) {
        auto it = relations_.find(predicate);
        return it != relations_.end() && it->second.erase(t) > 0;
    }

    bool has_tuple(const std::string& predicate, const Tuple& t) const {
        auto it = relations_.find(predicate);
        return it != relations_.end() && it->second.count(t) != 0;
    }

    bool holds(const std::string& predicate, std::size_t e) const { return has_tuple(predicate, {e}); }

    const std::set<Tuple>& tuples(const std::string& predicate) const {
        static const std::set<Tuple> empty;
        vocab_.arity(predicate);
        auto it = relations_.find(predicate);
        return it == relations_.end() ? empty : it->second;
    }

    /// Elements satisfying a unary predicate, ascending.
    std::vector<std::size_t> elements_with(const std::string& predicate) const {
        std::vector<std::size_t> out;
        for (const auto& t : tuples(predicate)) out.push_back(t[0]);
        return out;
    }

    /// All (predicate, tuple) pairs in vocabulary order.
    std::vector<std::pair<std::string, Tuple>> all_tuples() const {
        std::vector<std::pair<std::string, Tuple>> out;
        for (const auto& name : vocab_.names())
            for (const auto& t : tuples(name)) out.emplace_back(name, t);
        return out;
    }

private:
    void check_tuple(const std::string& predicate, const Tuple& t) const {
        const std::size_t arity = vocab_.arity(predicate);
        if (t.size() != arity)
            throw Error("predicate " + predicate + " has arity " + std::to_string(arity) + ", got " +
                        std::to_string(t.size()));
        for (std::size_t e : t)
            if (e >= names_.size()) throw Error("element " + std::to_string(e) + " not in the universe");
    }

    Vocabulary vocab_;
    std::vector<std::string> names_;
    std::map<std::string, std::set<Tuple>> relations_;
};

/// Builds A_phi. Elements are numbered in pre-order; propositions and
/// constants get one element per distinct name, every other node occurrence
/// its own element. Connective tuples are stored as (argument, parent), body
/// tuples as (body..., parent).
inline RelationalStructure encode(const Formula& f) {
    RelationalStructure a;
    std::map<std::string, std::size_t> leaves;

    auto visit = [&](auto&& self, const Formula& g) -> std::size_t {
        if (g.kind() == Kind::Prop || g.is_constant()) {
            const std::string key = g.to_string();
            if (auto it = leaves.find(key); it != leaves.end()) return it->second;
            const std::size_t e = a.add_element(key);
            leaves.emplace(key, e);
            a.add_tuple(pred::kReprPL, {e});
            if (g.kind() == Kind::Prop) a.add_tuple(pred::kVar, {e});
            else a.add_tuple(g.kind() == Kind::True ? pred::kConstTrue : pred::kConstFalse, {e});
            return e;
        }
        if (g.kind() == Kind::Implies || g.kind() == Kind::Iff)
            throw FragmentError("encode: unsupported connective in " + g.to_string() +
                                " (eliminate -> and <-> first)");
        const std::size_t e = a.add_element(g.to_string());
        if (is_propositional(g)) a.add_tuple(pred::kReprPL, {e});
        std::vector<std::size_t> args;
        for (std::size_t i = 0; i < g.arity(); ++i) args.push_back(self(self, g.child(i)));
        if (g.is_ctl_operator()) {
            a.add_tuple(pred::repr(g.op()), {e});
            Tuple t = args;
            t.push_back(e);
            a.add_tuple(pred::body(g.op()), std::move(t));
        } else {
            for (std::size_t i = 0; i < args.size(); ++i) a.add_tuple(pred::conn(g.kind(), i + 1), {args[i], e});
        }
        return e;
    };
    const std::size_t root = visit(visit, f);
    a.add_tuple(pred::kRepr, {root});
    return a;
}

/// Simple undirected graph with sorted adjacency lists.
class Graph {
public:
    explicit Graph(std::size_t n = 0) : adj_(n) {}

    std::size_t vertex_count() const { return adj_.size(); }

    void add_edge(std::size_t u, std::size_t v) {
        if (u == v) return;
        insert(u, v);
        insert(v, u);
    }

    bool has_edge(std::size_t u, std::size_t v) const {
        return std::binary_search(adj_.at(u).begin(), adj_.at(u).end(), v);
    }

    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_.at(v); }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& a : adj_) twice += a.size();
        return twice / 2;
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t u = 0; u < adj_.size(); ++u)
            for (std::size_t v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

private:
    void insert(std::size_t u, std::size_t v) {
        auto& a = adj_.at(u);
        auto it = std::lower_bound(a.begin(), a.end(), v);
        if (it == a.end() || *it != v) a.insert(it, v);
    }

    std::vector<std::vector<std::size_t>> adj_;
};

/// Vertices are the universe; u-v is an edge iff u != v occur in a common tuple.
inline Graph gaifman_graph(const RelationalStructure& a) {
    Graph g(a.size());
    for (const auto& [name, t] : a.all_tuples())
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) g.add_edge(t[i], t[j]);
    return g;
}

// ---------------------------------------------------------------------------
// Text format:
//   element i name...
//   rel PRED i j k
// Predicates outside the CTL vocabulary are declared on first use.

inline void write_structure(std::ostream& out, const RelationalStructure& a) {
    for (std::size_t e = 0; e < a.size(); ++e) out << "element " << e << ' ' << a.element_name(e) << '\n';
    for (const auto& [name, t] : a.all_tuples()) {
        out << "rel " << name;
        for (std::size_t e : t) out << ' ' << e;
        out << '\n';
    }
}

inline RelationalStructure read_structure(std::istream& in) {
    RelationalStructure a;
    std::vector<std::pair<std::string, Tuple>> pending;
    std::map<std::size_t, std::string> names;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string cmd;
        if (!(ss >> cmd)) continue;
        if (cmd == "element") {
            long long i = -1;
            if (!(ss >> i) || i < 0) throw ParseError("expected an element index", lineno);
            std::string name;
            std::getline(ss >> std::ws, name);
            if (name.empty()) name = "e" + std::to_string(i);
            if (!names.emplace(static_cast<std::size_t>(i), name).second)
                throw ParseError("duplicate element " + std::to_string(i), lineno);
        } else if (cmd == "rel") {
            std::string predicate;
            if (!(ss >> predicate)) throw ParseError("expected a predicate name", lineno);
            Tuple t;
            long long e;
            while (ss >> e) {
                if (e < 0) throw ParseError("negative element index", lineno);
                t.push_back(static_cast<std::size_t>(e));
            }
            if (!ss.eof()) throw ParseError("malformed tuple", lineno);
            if (t.empty()) throw ParseError("empty tuple", lineno);
            pending.emplace_back(predicate, std::move(t));
        } else {
            throw ParseError("unknown directive '" + cmd + "'", lineno);
        }
    }
    std::size_t expected = 0;
    for (const auto& [i, name] : names) {
        if (i != expected) throw ParseError("element indices must be 0..n-1; missing " + std::to_string(expected), lineno);
        a.add_element(name);
        ++expected;
    }
    for (auto& [predicate, t] : pending) {
        if (!a.vocabulary().contains(predicate)) a.declare(predicate, t.size());
        a.add_tuple(predicate, std::move(t));
    }
    return a;
}

} // namespace ctlfrag
