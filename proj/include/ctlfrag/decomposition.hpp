#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/error.hpp"
#include "ctlfrag/structure.hpp"

namespace ctlfrag {

enum class DecompositionShape { Path, Tree };

/// Bags over a structure's universe arranged on a path (bag i adjacent to
/// bag i+1) or on a tree given by `links`.
struct Decomposition {
    DecompositionShape shape = DecompositionShape::Path;
    std::vector<std::vector<std::size_t>> bags;
    std::vector<std::pair<std::size_t, std::size_t>> links;
};

struct DecompositionViolation {
    /// 0 for a malformed shape, otherwise the violated condition (1 cover,
    /// 2 tuples, 3 connectedness).
    int condition;
    std::string message;
};

/// Largest bag size minus one.
inline std::size_t width(const Decomposition& d) {
    if (d.bags.empty()) throw Error("width of an empty decomposition");
    std::size_t largest = 0;
    for (const auto& b : d.bags) largest = std::max(largest, b.size());
    return largest == 0 ? 0 : largest - 1;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> bag_adjacency(const Decomposition& d) {
    std::vector<std::vector<std::size_t>> adj(d.bags.size());
    if (d.shape == DecompositionShape::Path) {
        for (std::size_t i = 0; i + 1 < d.bags.size(); ++i) {
            adj[i].push_back(i + 1);
            adj[i + 1].push_back(i);
        }
    } else {
        for (auto [u, v] : d.links) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    }
    return adj;
}

inline std::string tuple_text(const std::string& predicate, const Tuple& t) {
    std::string s = predicate + "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + std::to_string(t[i]);
    return s + ")";
}

} // namespace detail

/// Checks the three decomposition conditions against the original tuples.
inline std::optional<DecompositionViolation> validate_decomposition(const RelationalStructure& a,
                                                                    const Decomposition& d) {
    const std::size_t r = d.bags.size();
    if (r == 0) return DecompositionViolation{0, "decomposition has no bags"};
    if (d.shape == DecompositionShape::Tree) {
        if (d.links.size() != r - 1)
            return DecompositionViolation{0, "tree with " + std::to_string(r) + " bags needs " +
                                                 std::to_string(r - 1) + " links"};
        for (auto [u, v] : d.links)
            if (u >= r || v >= r || u == v)
                return DecompositionViolation{0, "bad link " + std::to_string(u) + "-" + std::to_string(v)};
    }
    const auto adj = detail::bag_adjacency(d);
    if (d.shape == DecompositionShape::Tree) {
        std::vector<char> seen(r, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : adj[u])
                if (!seen[v]) seen[v] = 1, ++reached, stack.push_back(v);
        }
        if (reached != r) return DecompositionViolation{0, "tree links do not connect all bags"};
    }

    std::vector<std::vector<char>> member(r, std::vector<char>(a.size(), 0));
    for (std::size_t b = 0; b < r; ++b)
        for (std::size_t e : d.bags[b]) {
            if (e >= a.size())
                return DecompositionViolation{0, "bag " + std::to_string(b) + " holds unknown element " + std::to_string(e)};
            member[b][e] = 1;
        }

    for (std::size_t e = 0; e < a.size(); ++e) {
        bool covered = false;
        for (std::size_t b = 0; b < r && !covered; ++b) covered = member[b][e];
        if (!covered)
            return DecompositionViolation{1, "condition 1 violated: element " + std::to_string(e) + " (" +
                                                 a.element_name(e) + ") is in no bag"};
    }

    for (const auto& [name, t] : a.all_tuples()) {
        bool contained = false;
        for (std::size_t b = 0; b < r && !contained; ++b)
            contained = std::all_of(t.begin(), t.end(), [&](std::size_t e) { return member[b][e] != 0; });
        if (!contained)
            return DecompositionViolation{2, "condition 2 violated: tuple " + detail::tuple_text(name, t) +
                                                 " is in no single bag"};
    }

    for (std::size_t e = 0; e < a.size(); ++e) {
        std::size_t holding = 0, start = r;
        for (std::size_t b = 0; b < r; ++b)
            if (member[b][e]) ++holding, start = std::min(start, b);
        std::vector<char> seen(r, 0);
        std::vector<std::size_t> stack{start};
        seen[start] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : adj[u])
                if (!seen[v] && member[v][e]) seen[v] = 1, ++reached, stack.push_back(v);
        }
        if (reached != holding)
            return DecompositionViolation{3, "condition 3 violated: bags holding element " + std::to_string(e) + " (" +
                                                 a.element_name(e) + ") are not connected"};
    }
    return std::nullopt;
}

struct PathDecompositionResult {
    Decomposition decomposition;
    std::size_t width = 0;
};

/// Interval bags of a linear layout: bag i holds the i-th vertex and every
/// earlier vertex with a neighbour at position >= i.
inline Decomposition path_from_layout(const Graph& g, const std::vector<std::size_t>& order) {
    const std::size_t n = order.size();
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<std::size_t> last(n);
    for (std::size_t v = 0; v < n; ++v) {
        last[v] = pos[v];
        for (std::size_t u : g.neighbors(v)) last[v] = std::max(last[v], pos[u]);
    }
    Decomposition d;
    d.shape = DecompositionShape::Path;
    if (n == 0) {
        d.bags.emplace_back();
        return d;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> bag;
        for (std::size_t j = 0; j < i; ++j)
            if (last[order[j]] >= i) bag.push_back(order[j]);
        bag.push_back(order[i]);
        std::sort(bag.begin(), bag.end());
        d.bags.push_back(std::move(bag));
    }
    return d;
}

/// Minimum-degree elimination ordering; ties go to the lowest index.
inline std::vector<std::size_t> min_degree_order(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<std::size_t> degree(n, 0);
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    for (std::size_t v = 0; v < n; ++v) degree[v] = g.neighbors(v).size();
    std::vector<char> gone(n, 0);
    std::vector<std::size_t> order;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!gone[v] && (pick == n || degree[v] < degree[pick])) pick = v;
        std::vector<std::size_t> nbrs;
        for (std::size_t u = 0; u < n; ++u)
            if (!gone[u] && adj[pick][u]) nbrs.push_back(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                const std::size_t x = nbrs[i], y = nbrs[j];
                if (!adj[x][y]) adj[x][y] = adj[y][x] = 1, ++degree[x], ++degree[y];
            }
        for (std::size_t u : nbrs) adj[u][pick] = adj[pick][u] = 0, --degree[u];
        gone[pick] = 1;
        order.push_back(pick);
    }
    return order;
}

/// Heuristic path decomposition: lays out the minimum-degree elimination
/// ordering (and its reverse, keeping the narrower) as interval bags.
inline PathDecompositionResult pathwidth_upper(const RelationalStructure& a) {
    const Graph g = gaifman_graph(a);
    std::vector<std::size_t> order = min_degree_order(g);
    PathDecompositionResult best{path_from_layout(g, order), 0};
    best.width = width(best.decomposition);
    std::reverse(order.begin(), order.end());
    Decomposition reversed = path_from_layout(g, order);
    if (const std::size_t w = width(reversed); w < best.width) best = {std::move(reversed), w};
    return best;
}

inline constexpr std::size_t kDefaultExactElementLimit = 12;

/// Exact pathwidth as the vertex separation number: the minimum over vertex
/// orderings of the largest boundary of a prefix. Prefix sets are memoized;
/// prefixes whose boundary already reaches the heuristic bound are cut off.
inline PathDecompositionResult pathwidth_exact_decomposition(const RelationalStructure& a,
                                                             std::size_t element_limit = kDefaultExactElementLimit) {
    const std::size_t n = a.size();
    if (n > element_limit)
        throw LimitError("pathwidth_exact: " + std::to_string(n) + " elements exceed the limit of " +
                         std::to_string(element_limit) + "; use pathwidth_upper instead");
    if (n > 25) throw LimitError("pathwidth_exact: at most 25 elements are supported");
    const Graph g = gaifman_graph(a);
    if (n == 0) return {path_from_layout(g, {}), 0};

    const PathDecompositionResult upper = pathwidth_upper(a);
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<std::uint32_t> nbr(n, 0);
    for (auto [u, v] : g.edges()) nbr[u] |= 1U << v, nbr[v] |= 1U << u;

    constexpr std::uint8_t kInf = std::numeric_limits<std::uint8_t>::max();
    // best[S]: minimum over orderings of S (as a prefix) of the largest prefix boundary.
    std::vector<std::uint8_t> best(std::size_t{1} << n, kInf);
    best[0] = 0;
    const std::size_t bound = upper.width;
    for (std::uint32_t s = 1; s <= full; ++s) {
        std::size_t boundary = 0;
        for (std::size_t v = 0; v < n; ++v)
            if ((s >> v & 1U) && (nbr[v] & ~s)) ++boundary;
        if (boundary > bound) continue;
        std::uint8_t m = kInf;
        for (std::size_t v = 0; v < n; ++v)
            if (s >> v & 1U) m = std::min(m, best[s & ~(1U << v)]);
        if (m != kInf) best[s] = static_cast<std::uint8_t>(std::max<std::size_t>(m, boundary));
    }
    if (best[full] == kInf || best[full] >= upper.width) return upper;

    std::vector<std::size_t> order(n);
    std::uint32_t s = full;
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t v = 0; v < n; ++v) {
            if (!(s >> v & 1U)) continue;
            const std::uint32_t rest = s & ~(1U << v);
            if (best[rest] != kInf && best[rest] <= best[full]) {
                order[i] = v;
                s = rest;
                break;
            }
        }
    }
    PathDecompositionResult out{path_from_layout(g, order), 0};
    out.width = width(out.decomposition);
    return out;
}

inline std::size_t pathwidth_exact(const RelationalStructure& a,
                                   std::size_t element_limit = kDefaultExactElementLimit) {
    return pathwidth_exact_decomposition(a, element_limit).width;
}

/// kappa(phi) = pw(A_phi) + td(phi).
struct FormulaParameter {
    std::size_t pathwidth = 0;
    bool pathwidth_exact = true;  // false: heuristic upper bound
    std::size_t temporal_depth = 0;
    std::size_t value() const { return pathwidth + temporal_depth; }
};

inline FormulaParameter parameter(const Formula& f, std::size_t element_limit = kDefaultExactElementLimit) {
    const RelationalStructure a = encode(eliminate_implications(f));
    FormulaParameter p;
    p.temporal_depth = temporal_depth(f);
    if (a.size() <= element_limit) {
        p.pathwidth = pathwidth_exact(a, element_limit);
    } else {
        p.pathwidth = pathwidth_upper(a).width;
        p.pathwidth_exact = false;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Text format:
//   path | tree
//   bag i: e1 e2 e3
//   link i j        (tree only)

inline void write_decomposition(std::ostream& out, const Decomposition& d) {
    out << (d.shape == DecompositionShape::Path ? "path" : "tree") << '\n';
    for (std::size_t i = 0; i < d.bags.size(); ++i) {
        out << "bag " << i << ':';
        for (std::size_t e : d.bags[i]) out << ' ' << e;
        out << '\n';
    }
    if (d.shape == DecompositionShape::Tree)
        for (auto [u, v] : d.links) out << "link " << u << ' ' << v << '\n';
}

inline Decomposition read_decomposition(std::istream& in) {
    Decomposition d;
    bool have_shape = false;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> bags;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string cmd;
        if (!(ss >> cmd)) continue;
        if (cmd == "path" || cmd == "tree") {
            if (have_shape) throw ParseError("duplicate shape header", lineno);
            d.shape = cmd == "path" ? DecompositionShape::Path : DecompositionShape::Tree;
            have_shape = true;
        } else if (cmd == "bag") {
            std::string idx;
            if (!(ss >> idx) || idx.empty() || idx.back() != ':') throw ParseError("expected 'bag i:'", lineno);
            idx.pop_back();
            std::size_t i = 0;
            try {
                i = std::stoul(idx);
            } catch (const std::exception&) {
                throw ParseError("bad bag index '" + idx + "'", lineno);
            }
            std::vector<std::size_t> bag;
            long long e;
            while (ss >> e) {
                if (e < 0) throw ParseError("negative element index", lineno);
                bag.push_back(static_cast<std::size_t>(e));
            }
            if (!ss.eof()) throw ParseError("malformed bag", lineno);
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            bags.emplace_back(i, std::move(bag));
        } else if (cmd == "link") {
            long long u = -1, v = -1;
            if (!(ss >> u >> v) || u < 0 || v < 0) throw ParseError("expected 'link i j'", lineno);
            d.links.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
        } else {
            throw ParseError("unknown directive '" + cmd + "'", lineno);
        }
    }
    if (!have_shape) throw ParseError("missing 'path' or 'tree' header", lineno);
    std::sort(bags.begin(), bags.end());
    for (std::size_t i = 0; i < bags.size(); ++i) {
        if (bags[i].first != i) throw ParseError("bag indices must be 0..r-1", lineno);
        d.bags.push_back(std::move(bags[i].second));
    }
    if (d.shape == DecompositionShape::Path && !d.links.empty())
        throw ParseError("'link' lines are only valid for trees", lineno);
    return d;
}

} // namespace ctlfrag
