#pragma once

// CTL formulas: immutable AST, parser, printer and the syntactic operations
// the rest of the library builds on (NNF, temporal depth, subformulas,
// operator fragments).

#include <algorithm>
#include <array>
#include <bitset>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ctlfrag/error.hpp"

namespace ctlfrag {

enum class CtlOp : std::uint8_t { AX, EX, AF, EF, AG, EG, AU, EU };

inline constexpr std::array<CtlOp, 8> kAllCtlOps = {CtlOp::AX, CtlOp::EX, CtlOp::AF, CtlOp::EF,
                                                    CtlOp::AG, CtlOp::EG, CtlOp::AU, CtlOp::EU};

inline std::string_view op_name(CtlOp op) {
    static constexpr std::array<std::string_view, 8> names = {"AX", "EX", "AF", "EF",
                                                              "AG", "EG", "AU", "EU"};
    return names[static_cast<std::size_t>(op)];
}

inline bool is_binary_op(CtlOp op) { return op == CtlOp::AU || op == CtlOp::EU; }

/// A set of CTL-operators, i.e. the T of a fragment CTL(T).
class CtlOperatorSet {
public:
    CtlOperatorSet() = default;
    CtlOperatorSet(std::initializer_list<CtlOp> ops) {
        for (CtlOp op : ops) insert(op);
    }

    void insert(CtlOp op) { bits_.set(static_cast<std::size_t>(op)); }
    bool contains(CtlOp op) const { return bits_.test(static_cast<std::size_t>(op)); }
    bool empty() const { return bits_.none(); }
    std::size_t size() const { return bits_.count(); }
    bool subset_of(const CtlOperatorSet& other) const { return (bits_ & ~other.bits_).none(); }

    std::vector<CtlOp> ops() const {
        std::vector<CtlOp> out;
        for (CtlOp op : kAllCtlOps)
            if (contains(op)) out.push_back(op);
        return out;
    }

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (CtlOp op : ops()) {
            if (!first) out += ", ";
            out += op_name(op);
            first = false;
        }
        return out + "}";
    }

    friend bool operator==(const CtlOperatorSet&, const CtlOperatorSet&) = default;

private:
    std::bitset<8> bits_;
};

enum class Kind : std::uint8_t {
    True,
    False,
    Prop,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Temporal,  // unary CTL-operator (AX .. EG)
    Until,     // AU / EU
};

class Formula;

namespace detail {
struct FormulaNode;
inline Formula make(Kind kind, CtlOp op, std::vector<Formula> children);
} // namespace detail

/// Immutable CTL formula. Copies share structure; values are safe to pass
/// between threads.
class Formula {
public:
    static Formula top();
    static Formula bottom();
    static Formula prop(std::string name);
    static Formula negation(Formula f);
    static Formula conjunction(Formula a, Formula b);
    static Formula disjunction(Formula a, Formula b);
    static Formula implication(Formula a, Formula b);
    static Formula biconditional(Formula a, Formula b);
    static Formula temporal(CtlOp op, Formula body);
    static Formula until(CtlOp op, Formula left, Formula right);

    Kind kind() const;
    /// Proposition name; empty for every other kind.
    const std::string& name() const;
    /// CTL-operator of a Temporal/Until node.
    CtlOp op() const;
    std::size_t arity() const;
    const Formula& child(std::size_t i) const;

    /// Number of AST nodes.
    std::size_t size() const;

    bool is_constant() const { return kind() == Kind::True || kind() == Kind::False; }
    bool is_ctl_operator() const { return kind() == Kind::Temporal || kind() == Kind::Until; }

    std::string to_string() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    friend Formula detail::make(Kind, CtlOp, std::vector<Formula>);
    explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
    Kind kind;
    CtlOp op = CtlOp::AX;
    std::string name;
    std::vector<Formula> children;
    std::size_t size = 1;
};
} // namespace detail

inline Formula Formula::top() {
    static const Formula t{std::make_shared<const detail::FormulaNode>(detail::FormulaNode{Kind::True, CtlOp::AX, {}, {}, 1})};
    return t;
}

inline Formula Formula::bottom() {
    static const Formula f{std::make_shared<const detail::FormulaNode>(detail::FormulaNode{Kind::False, CtlOp::AX, {}, {}, 1})};
    return f;
}

inline Formula Formula::prop(std::string name) {
    detail::FormulaNode node{Kind::Prop, CtlOp::AX, {}, {}, 1};
    node.name = std::move(name);
    return Formula{std::make_shared<const detail::FormulaNode>(std::move(node))};
}

inline Formula Formula::negation(Formula f) { return detail::make(Kind::Not, CtlOp::AX, {std::move(f)}); }
inline Formula Formula::conjunction(Formula a, Formula b) {
    return detail::make(Kind::And, CtlOp::AX, {std::move(a), std::move(b)});
}
inline Formula Formula::disjunction(Formula a, Formula b) {
    return detail::make(Kind::Or, CtlOp::AX, {std::move(a), std::move(b)});
}
inline Formula Formula::implication(Formula a, Formula b) {
    return detail::make(Kind::Implies, CtlOp::AX, {std::move(a), std::move(b)});
}
inline Formula Formula::biconditional(Formula a, Formula b) {
    return detail::make(Kind::Iff, CtlOp::AX, {std::move(a), std::move(b)});
}
inline Formula Formula::temporal(CtlOp op, Formula body) {
    if (is_binary_op(op)) throw Error("temporal(): " + std::string(op_name(op)) + " is binary");
    return detail::make(Kind::Temporal, op, {std::move(body)});
}
inline Formula Formula::until(CtlOp op, Formula left, Formula right) {
    if (!is_binary_op(op)) throw Error("until(): " + std::string(op_name(op)) + " is unary");
    return detail::make(Kind::Until, op, {std::move(left), std::move(right)});
}

inline Kind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline CtlOp Formula::op() const { return node_->op; }
inline std::size_t Formula::arity() const { return node_->children.size(); }
inline const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }
inline std::size_t Formula::size() const { return node_->size; }

namespace detail {
inline Formula make(Kind kind, CtlOp op, std::vector<Formula> children) {
    FormulaNode node{kind, op, {}, {}, 1};
    for (const Formula& c : children) node.size += c.size();
    node.children = std::move(children);
    return Formula{std::make_shared<const FormulaNode>(std::move(node))};
}
} // namespace detail

inline bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.size() != b.size()) return false;
    if (a.is_ctl_operator() && a.op() != b.op()) return false;
    if (a.kind() == Kind::Prop) return a.name() == b.name();
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (a.child(i) != b.child(i)) return false;
    return true;
}

// Shorthand builders.
inline Formula top() { return Formula::top(); }
inline Formula bottom() { return Formula::bottom(); }
inline Formula prop(std::string name) { return Formula::prop(std::move(name)); }
inline Formula lnot(Formula f) { return Formula::negation(std::move(f)); }
inline Formula land(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula lor(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return Formula::implication(std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return Formula::biconditional(std::move(a), std::move(b)); }
inline Formula AX(Formula f) { return Formula::temporal(CtlOp::AX, std::move(f)); }
inline Formula EX(Formula f) { return Formula::temporal(CtlOp::EX, std::move(f)); }
inline Formula AF(Formula f) { return Formula::temporal(CtlOp::AF, std::move(f)); }
inline Formula EF(Formula f) { return Formula::temporal(CtlOp::EF, std::move(f)); }
inline Formula AG(Formula f) { return Formula::temporal(CtlOp::AG, std::move(f)); }
inline Formula EG(Formula f) { return Formula::temporal(CtlOp::EG, std::move(f)); }
inline Formula AU(Formula a, Formula b) { return Formula::until(CtlOp::AU, std::move(a), std::move(b)); }
inline Formula EU(Formula a, Formula b) { return Formula::until(CtlOp::EU, std::move(a), std::move(b)); }

/// Left-nested conjunction; `true` for an empty list.
inline Formula conjoin(const std::vector<Formula>& parts) {
    if (parts.empty()) return top();
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = land(acc, parts[i]);
    return acc;
}

/// Left-nested disjunction; `false` for an empty list.
inline Formula disjoin(const std::vector<Formula>& parts) {
    if (parts.empty()) return bottom();
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = lor(acc, parts[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Formula& f) {
    switch (f.kind()) {
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Not:
    case Kind::Temporal: return 5;
    default: return 6;
    }
}

inline void print(const Formula& f, std::string& out);

inline void print_wrapped(const Formula& f, bool parens, std::string& out) {
    if (parens) out += '(';
    print(f, out);
    if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
    const int prec = precedence(f);
    switch (f.kind()) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Prop: out += f.name(); return;
    case Kind::Not:
        out += '~';
        print_wrapped(f.child(0), precedence(f.child(0)) < 5, out);
        return;
    case Kind::Temporal:
        out += op_name(f.op());
        out += ' ';
        print_wrapped(f.child(0), precedence(f.child(0)) < 5, out);
        return;
    case Kind::Until:
        out += f.op() == CtlOp::AU ? "A[" : "E[";
        print(f.child(0), out);
        out += " U ";
        print(f.child(1), out);
        out += ']';
        return;
    case Kind::And:
    case Kind::Or: {
        // left-associative
        print_wrapped(f.child(0), precedence(f.child(0)) < prec, out);
        out += f.kind() == Kind::And ? " & " : " | ";
        print_wrapped(f.child(1), precedence(f.child(1)) <= prec, out);
        return;
    }
    case Kind::Implies:
    case Kind::Iff: {
        // right-associative
        print_wrapped(f.child(0), precedence(f.child(0)) <= prec, out);
        out += f.kind() == Kind::Implies ? " -> " : " <-> ";
        print_wrapped(f.child(1), precedence(f.child(1)) < prec, out);
        return;
    }
    }
}

} // namespace detail

/// Canonical text with the minimum parentheses the grammar needs.
inline std::string Formula::to_string() const {
    std::string out;
    detail::print(*this, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   iff     := implies ('<->' iff)?
//   implies := or ('->' implies)?
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '~' unary | TEMPORAL unary | primary
//   primary := 'true' | 'false' | IDENT | '(' iff ')' | ('A'|'E') '[' iff 'U' iff ']'

namespace detail {

enum class Tok { Ident, True, False, Temporal, PathA, PathE, Until, LBrack, RBrack, LParen, RParen,
                 Not, And, Or, Implies, Iff, End };

struct Token {
    Tok type;
    std::string text;
    std::size_t pos;
    CtlOp op = CtlOp::AX;
};

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

inline std::optional<CtlOp> temporal_keyword(std::string_view w) {
    for (CtlOp op : kAllCtlOps)
        if (!is_binary_op(op) && w == op_name(op)) return op;
    return std::nullopt;
}

inline bool is_keyword(std::string_view w) {
    return w == "true" || w == "false" || w == "A" || w == "E" || w == "U" ||
           temporal_keyword(w).has_value();
}

inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_word_char(c)) {
            while (i < text.size() && is_word_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            Token t{Tok::Ident, word, start};
            if (word == "true") t.type = Tok::True;
            else if (word == "false") t.type = Tok::False;
            else if (word == "A") t.type = Tok::PathA;
            else if (word == "E") t.type = Tok::PathE;
            else if (word == "U") t.type = Tok::Until;
            else if (auto op = temporal_keyword(word)) {
                t.type = Tok::Temporal;
                t.op = *op;
            }
            out.push_back(std::move(t));
            continue;
        }
        auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
        if (starts("<->")) {
            out.push_back({Tok::Iff, "<->", start});
            i += 3;
        } else if (starts("->")) {
            out.push_back({Tok::Implies, "->", start});
            i += 2;
        } else {
            Tok type;
            switch (c) {
            case '~': type = Tok::Not; break;
            case '&': type = Tok::And; break;
            case '|': type = Tok::Or; break;
            case '(': type = Tok::LParen; break;
            case ')': type = Tok::RParen; break;
            case '[': type = Tok::LBrack; break;
            case ']': type = Tok::RBrack; break;
            default: throw ParseError(std::string("unknown token '") + c + "'", start);
            }
            out.push_back({type, std::string(1, c), start});
            ++i;
        }
    }
    out.push_back({Tok::End, "", text.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    Formula parse() {
        Formula f = parse_iff();
        if (peek().type != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool accept(Tok t) {
        if (peek().type != t) return false;
        ++pos_;
        return true;
    }
    void expect(Tok t, const char* what) {
        if (!accept(t)) fail(std::string("expected ") + what);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error: " + msg, peek().pos);
    }

    Formula parse_iff() {
        Formula lhs = parse_implies();
        if (accept(Tok::Iff)) return iff(lhs, parse_iff());
        return lhs;
    }
    Formula parse_implies() {
        Formula lhs = parse_or();
        if (accept(Tok::Implies)) return implies(lhs, parse_implies());
        return lhs;
    }
    Formula parse_or() {
        Formula lhs = parse_and();
        while (accept(Tok::Or)) lhs = lor(lhs, parse_and());
        return lhs;
    }
    Formula parse_and() {
        Formula lhs = parse_unary();
        while (accept(Tok::And)) lhs = land(lhs, parse_unary());
        return lhs;
    }
    Formula parse_unary() {
        if (accept(Tok::Not)) return lnot(parse_unary());
        if (peek().type == Tok::Temporal) {
            const CtlOp op = advance().op;
            return Formula::temporal(op, parse_unary());
        }
        return parse_primary();
    }
    Formula parse_primary() {
        const Token& t = peek();
        switch (t.type) {
        case Tok::True: advance(); return top();
        case Tok::False: advance(); return bottom();
        case Tok::Ident: advance(); return prop(t.text);
        case Tok::LParen: {
            advance();
            Formula f = parse_iff();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::PathA:
        case Tok::PathE: {
            const CtlOp op = t.type == Tok::PathA ? CtlOp::AU : CtlOp::EU;
            advance();
            expect(Tok::LBrack, "'[' after path quantifier");
            Formula lhs = parse_iff();
            expect(Tok::Until, "'U'");
            Formula rhs = parse_iff();
            expect(Tok::RBrack, "']'");
            return Formula::until(op, lhs, rhs);
        }
        case Tok::End: fail("unexpected end of input");
        default: fail("unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the textual formula grammar. Throws ParseError with a byte offset.
inline Formula parse_formula(std::string_view text) { return detail::Parser(text).parse(); }

/// True iff `name` is usable as a proposition.
inline bool is_valid_proposition_name(std::string_view name) {
    if (name.empty() || detail::is_keyword(name)) return false;
    return std::all_of(name.begin(), name.end(), detail::is_word_char);
}

// ---------------------------------------------------------------------------
// Syntactic operations

/// Removes -> and <-> without moving negations.
inline Formula eliminate_implications(const Formula& f) {
    switch (f.kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop: return f;
    case Kind::Not: return lnot(eliminate_implications(f.child(0)));
    case Kind::And: return land(eliminate_implications(f.child(0)), eliminate_implications(f.child(1)));
    case Kind::Or: return lor(eliminate_implications(f.child(0)), eliminate_implications(f.child(1)));
    case Kind::Implies:
        return lor(lnot(eliminate_implications(f.child(0))), eliminate_implications(f.child(1)));
    case Kind::Iff: {
        Formula a = eliminate_implications(f.child(0));
        Formula b = eliminate_implications(f.child(1));
        return lor(land(a, b), land(lnot(a), lnot(b)));
    }
    case Kind::Temporal: return Formula::temporal(f.op(), eliminate_implications(f.child(0)));
    case Kind::Until:
        return Formula::until(f.op(), eliminate_implications(f.child(0)),
                              eliminate_implications(f.child(1)));
    }
    return f;
}

namespace detail {

inline Formula nnf(const Formula& f, bool negated) {
    switch (f.kind()) {
    case Kind::True: return negated ? bottom() : top();
    case Kind::False: return negated ? top() : bottom();
    case Kind::Prop: return negated ? lnot(f) : f;
    case Kind::Not: return nnf(f.child(0), !negated);
    case Kind::And:
        return negated ? lor(nnf(f.child(0), true), nnf(f.child(1), true))
                       : land(nnf(f.child(0), false), nnf(f.child(1), false));
    case Kind::Or:
        return negated ? land(nnf(f.child(0), true), nnf(f.child(1), true))
                       : lor(nnf(f.child(0), false), nnf(f.child(1), false));
    case Kind::Implies:
        return negated ? land(nnf(f.child(0), false), nnf(f.child(1), true))
                       : lor(nnf(f.child(0), true), nnf(f.child(1), false));
    case Kind::Iff: {
        const Formula& a = f.child(0);
        const Formula& b = f.child(1);
        if (negated)
            return lor(land(nnf(a, false), nnf(b, true)), land(nnf(a, true), nnf(b, false)));
        return lor(land(nnf(a, false), nnf(b, false)), land(nnf(a, true), nnf(b, true)));
    }
    case Kind::Temporal: {
        if (!negated) return Formula::temporal(f.op(), nnf(f.child(0), false));
        Formula body = nnf(f.child(0), true);
        switch (f.op()) {
        case CtlOp::AX: return EX(body);
        case CtlOp::EX: return AX(body);
        case CtlOp::AF: return EG(body);
        case CtlOp::EG: return AF(body);
        case CtlOp::AG: return EF(body);
        case CtlOp::EF: return AG(body);
        default: break;
        }
        break;
    }
    case Kind::Until: {
        if (!negated)
            return Formula::until(f.op(), nnf(f.child(0), false), nnf(f.child(1), false));
        // ~A[a U b] == E[~b U (~a & ~b)] | EG ~b, and dually for EU.
        Formula not_a = nnf(f.child(0), true);
        Formula not_b = nnf(f.child(1), true);
        if (f.op() == CtlOp::AU) return lor(EU(not_b, land(not_a, not_b)), EG(not_b));
        return lor(AU(not_b, land(not_a, not_b)), AG(not_b));
    }
    }
    return f;
}

} // namespace detail

/// Negation normal form: negation only directly above propositions, no -> or <->.
inline Formula to_nnf(const Formula& f) { return detail::nnf(f, false); }

inline bool is_nnf(const Formula& f) {
    switch (f.kind()) {
    case Kind::Implies:
    case Kind::Iff: return false;
    case Kind::Not: return f.child(0).kind() == Kind::Prop;
    default:
        for (std::size_t i = 0; i < f.arity(); ++i)
            if (!is_nnf(f.child(i))) return false;
        return true;
    }
}

/// Maximum nesting depth of CTL-operators.
inline std::size_t temporal_depth(const Formula& f) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < f.arity(); ++i) d = std::max(d, temporal_depth(f.child(i)));
    return f.is_ctl_operator() ? d + 1 : d;
}

/// Distinct subformulas in pre-order of first occurrence; the formula itself first.
inline std::vector<Formula> subformulas(const Formula& f) {
    std::vector<Formula> out;
    std::unordered_set<std::string> seen;
    auto visit = [&](auto&& self, const Formula& g) -> void {
        if (!seen.insert(g.to_string()).second) return;
        out.push_back(g);
        for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
    };
    visit(visit, f);
    return out;
}

inline CtlOperatorSet operator_set(const Formula& f) {
    CtlOperatorSet ops;
    auto visit = [&](auto&& self, const Formula& g) -> void {
        if (g.is_ctl_operator()) ops.insert(g.op());
        for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
    };
    visit(visit, f);
    return ops;
}

inline std::set<std::string> propositions(const Formula& f) {
    std::set<std::string> out;
    auto visit = [&](auto&& self, const Formula& g) -> void {
        if (g.kind() == Kind::Prop) out.insert(g.name());
        for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
    };
    visit(visit, f);
    return out;
}

/// True iff no CTL-operator occurs.
inline bool is_propositional(const Formula& f) { return operator_set(f).empty(); }

} // namespace ctlfrag
