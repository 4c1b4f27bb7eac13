#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/error.hpp"

namespace ctlfrag {

/// K = (W, R, V) over a declared proposition universe. Worlds are 0..n-1.
class KripkeStructure {
public:
    KripkeStructure() = default;
    explicit KripkeStructure(std::size_t worlds) : succ_(worlds), labels_(worlds) {}

    std::size_t world_count() const { return succ_.size(); }

    std::size_t add_world() {
        succ_.emplace_back();
        labels_.emplace_back();
        return succ_.size() - 1;
    }

    void add_edge(std::size_t from, std::size_t to) {
        check_world(from);
        check_world(to);
        auto& s = succ_[from];
        auto it = std::lower_bound(s.begin(), s.end(), to);
        if (it == s.end() || *it != to) s.insert(it, to);
    }

    void remove_edge(std::size_t from, std::size_t to) {
        check_world(from);
        auto& s = succ_[from];
        s.erase(std::remove(s.begin(), s.end(), to), s.end());
    }

    bool has_edge(std::size_t from, std::size_t to) const {
        check_world(from);
        return std::binary_search(succ_[from].begin(), succ_[from].end(), to);
    }

    /// Sorted, duplicate-free.
    const std::vector<std::size_t>& successors(std::size_t w) const {
        check_world(w);
        return succ_[w];
    }

    void declare_proposition(const std::string& p) { universe_.insert(p); }

    /// Labels `p` at `w`; declares `p` if needed.
    void label(std::size_t w, const std::string& p) {
        check_world(w);
        universe_.insert(p);
        labels_[w].insert(p);
    }

    void unlabel(std::size_t w, const std::string& p) {
        check_world(w);
        labels_[w].erase(p);
    }

    bool holds(std::size_t w, const std::string& p) const {
        check_world(w);
        return labels_[w].count(p) != 0;
    }

    const std::set<std::string>& labels(std::size_t w) const {
        check_world(w);
        return labels_[w];
    }

    const std::set<std::string>& propositions() const { return universe_; }

private:
    void check_world(std::size_t w) const {
        if (w >= succ_.size()) throw Error("world " + std::to_string(w) + " out of range");
    }

    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::set<std::string>> labels_;
    std::set<std::string> universe_;
};

struct KripkeViolation {
    std::size_t world;
    std::string reason;
};

/// Checks totality and the labeling invariant; nullopt means valid.
inline std::optional<KripkeViolation> validate(const KripkeStructure& k) {
    for (std::size_t w = 0; w < k.world_count(); ++w) {
        if (k.successors(w).empty())
            return KripkeViolation{w, "world " + std::to_string(w) + " has no successor"};
        for (const auto& p : k.labels(w))
            if (k.propositions().count(p) == 0)
                return KripkeViolation{w, "world " + std::to_string(w) + " carries undeclared proposition " + p};
    }
    return std::nullopt;
}

namespace detail {

using WorldSet = std::vector<char>;

class FixpointChecker {
public:
    explicit FixpointChecker(const KripkeStructure& k) : k_(k), n_(k.world_count()) {}

    WorldSet eval(const Formula& f) {
        switch (f.kind()) {
        case Kind::True: return WorldSet(n_, 1);
        case Kind::False: return WorldSet(n_, 0);
        case Kind::Prop: {
            if (k_.propositions().count(f.name()) == 0)
                throw Error("proposition '" + f.name() + "' is not in the structure's universe");
            WorldSet s(n_);
            for (std::size_t w = 0; w < n_; ++w) s[w] = k_.holds(w, f.name());
            return s;
        }
        case Kind::Not: {
            WorldSet s = eval(f.child(0));
            for (auto& b : s) b = !b;
            return s;
        }
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff: {
            WorldSet a = eval(f.child(0));
            WorldSet b = eval(f.child(1));
            for (std::size_t w = 0; w < n_; ++w) {
                switch (f.kind()) {
                case Kind::And: a[w] = a[w] && b[w]; break;
                case Kind::Or: a[w] = a[w] || b[w]; break;
                case Kind::Implies: a[w] = !a[w] || b[w]; break;
                default: a[w] = (a[w] != 0) == (b[w] != 0); break;
                }
            }
            return a;
        }
        case Kind::Temporal: return temporal(f.op(), eval(f.child(0)));
        case Kind::Until: return until(f.op() == CtlOp::AU, eval(f.child(0)), eval(f.child(1)));
        }
        return WorldSet(n_, 0);
    }

private:
    bool all_succ(std::size_t w, const WorldSet& s) const {
        for (std::size_t v : k_.successors(w))
            if (!s[v]) return false;
        return true;
    }
    bool some_succ(std::size_t w, const WorldSet& s) const {
        for (std::size_t v : k_.successors(w))
            if (s[v]) return true;
        return false;
    }

    WorldSet temporal(CtlOp op, const WorldSet& body) const {
        WorldSet r(n_);
        switch (op) {
        case CtlOp::AX:
            for (std::size_t w = 0; w < n_; ++w) r[w] = all_succ(w, body);
            return r;
        case CtlOp::EX:
            for (std::size_t w = 0; w < n_; ++w) r[w] = some_succ(w, body);
            return r;
        case CtlOp::EF: return until(false, WorldSet(n_, 1), body);
        case CtlOp::AF: return until(true, WorldSet(n_, 1), body);
        case CtlOp::EG: return globally(false, body);
        case CtlOp::AG: return globally(true, body);
        default: break;
        }
        throw Error("unexpected binary operator");
    }

    // Least fixpoint R = b | (a & pre(R)).
    WorldSet until(bool universal, const WorldSet& a, const WorldSet& b) const {
        WorldSet r = b;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t w = 0; w < n_; ++w) {
                if (r[w] || !a[w]) continue;
                if (universal ? all_succ(w, r) : some_succ(w, r)) {
                    r[w] = 1;
                    changed = true;
                }
            }
        }
        return r;
    }

    // Greatest fixpoint R = s & pre(R).
    WorldSet globally(bool universal, const WorldSet& s) const {
        WorldSet r = s;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t w = 0; w < n_; ++w) {
                if (!r[w]) continue;
                if (!(universal ? all_succ(w, r) : some_succ(w, r))) {
                    r[w] = 0;
                    changed = true;
                }
            }
        }
        return r;
    }

    const KripkeStructure& k_;
    std::size_t n_;
};

} // namespace detail

/// Worlds of `k` satisfying `f`, as a 0/1 vector.
inline std::vector<char> satisfying_worlds(const KripkeStructure& k, const Formula& f) {
    if (auto v = validate(k)) throw Error("invalid Kripke structure: " + v->reason);
    return detail::FixpointChecker(k).eval(f);
}

/// K, w |= f.
inline bool model_check(const KripkeStructure& k, std::size_t w, const Formula& f) {
    if (w >= k.world_count()) throw Error("world " + std::to_string(w) + " out of range");
    return satisfying_worlds(k, f)[w] != 0;
}

// ---------------------------------------------------------------------------
// Text format:
//   worlds N
//   edge i j
//   label i p q r
//   props p q      (optional: declares propositions without labeling them)
//   # comment

inline KripkeStructure read_kripke(std::istream& in) {
    KripkeStructure k;
    bool have_worlds = false;
    std::string line;
    std::size_t lineno = 0;
    auto index = [&](std::istringstream& ss) {
        long long v = -1;
        if (!(ss >> v) || v < 0) throw ParseError("expected a world index", lineno);
        if (static_cast<std::size_t>(v) >= k.world_count())
            throw ParseError("world index " + std::to_string(v) + " out of range", lineno);
        return static_cast<std::size_t>(v);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string cmd;
        if (!(ss >> cmd)) continue;
        if (cmd == "worlds") {
            long long n = -1;
            if (have_worlds) throw ParseError("duplicate 'worlds' line", lineno);
            if (!(ss >> n) || n < 1) throw ParseError("'worlds' needs a positive count", lineno);
            k = KripkeStructure(static_cast<std::size_t>(n));
            have_worlds = true;
            continue;
        }
        if (!have_worlds && cmd != "props") throw ParseError("'worlds' must come first", lineno);
        if (cmd == "edge") {
            std::size_t i = index(ss);
            std::size_t j = index(ss);
            k.add_edge(i, j);
        } else if (cmd == "label") {
            std::size_t i = index(ss);
            std::string p;
            while (ss >> p) {
                if (!is_valid_proposition_name(p)) throw ParseError("bad proposition name '" + p + "'", lineno);
                k.label(i, p);
            }
        } else if (cmd == "props") {
            std::string p;
            while (ss >> p) {
                if (!is_valid_proposition_name(p)) throw ParseError("bad proposition name '" + p + "'", lineno);
                k.declare_proposition(p);
            }
        } else {
            throw ParseError("unknown directive '" + cmd + "'", lineno);
        }
        std::string extra;
        if ((cmd == "edge") && (ss >> extra)) throw ParseError("trailing input '" + extra + "'", lineno);
    }
    if (!have_worlds) throw ParseError("missing 'worlds' line", lineno);
    return k;
}

inline void write_kripke(std::ostream& out, const KripkeStructure& k) {
    out << "worlds " << k.world_count() << '\n';
    std::set<std::string> unlabeled = k.propositions();
    for (std::size_t w = 0; w < k.world_count(); ++w)
        for (const auto& p : k.labels(w)) unlabeled.erase(p);
    if (!unlabeled.empty()) {
        out << "props";
        for (const auto& p : unlabeled) out << ' ' << p;
        out << '\n';
    }
    for (std::size_t w = 0; w < k.world_count(); ++w)
        for (std::size_t v : k.successors(w)) out << "edge " << w << ' ' << v << '\n';
    for (std::size_t w = 0; w < k.world_count(); ++w) {
        if (k.labels(w).empty()) continue;
        out << "label " << w;
        for (const auto& p : k.labels(w)) out << ' ' << p;
        out << '\n';
    }
}

} // namespace ctlfrag
