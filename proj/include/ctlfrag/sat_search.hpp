#pragma once

// Satisfiability by search: exhaustive enumeration of small Kripke
// structures, and the bounded-depth tree-model search for CTL({AX,EX}).

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ctlfrag/ctl.hpp"
#include "ctlfrag/error.hpp"
#include "ctlfrag/kripke.hpp"

namespace ctlfrag {

/// Largest world count the enumerator materializes frames for.
inline constexpr std::size_t kMaxEnumeratedWorlds = 5;

enum class SearchStatus { Satisfiable, NoModelUpToBound, BudgetExhausted };

inline const char* to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Satisfiable: return "satisfiable";
    case SearchStatus::NoModelUpToBound: return "no-model-up-to-bound";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
}

struct BruteForceOptions {
    /// Maximum number of (frame, labeling) candidates examined over all sizes.
    std::uint64_t budget = std::uint64_t{1} << 24;
    unsigned workers = 1;
    /// Evaluate all labelings of a frame at once when they fit.
    bool bit_parallel = true;
};

struct BruteForceResult {
    SearchStatus status = SearchStatus::NoModelUpToBound;
    std::optional<KripkeStructure> witness;
    std::size_t witness_world = 0;
    std::uint64_t candidates = 0;
    /// Largest world count whose candidate space was searched completely.
    std::size_t complete_up_to = 0;
};

namespace detail {

using Mask = std::uint32_t;

/// A frame is the successor mask of every world (bit j of succ[i] = edge i->j).
struct Frame {
    std::vector<Mask> succ;
};

// Every world reachable from 0, and BFS from 0 (successors in ascending
// order) discovers worlds in index order. Each isomorphism class of rooted
// reachable frames has at least one such member.
inline bool is_bfs_ordered_frame(const std::vector<Mask>& succ) {
    const std::size_t n = succ.size();
    std::size_t next = 1;
    Mask seen = 1;
    for (std::size_t head = 0; head < next; ++head) {
        for (std::size_t v = 0; v < n; ++v) {
            if (!(succ[head] >> v & 1U) || (seen >> v & 1U)) continue;
            if (v != next) return false;
            seen |= Mask{1} << v;
            ++next;
        }
    }
    return next == n;
}

// Successor masks packed with world 0 in the least significant digit.
inline std::uint64_t pack_frame(const std::vector<Mask>& succ) {
    std::uint64_t packed = 0;
    for (std::size_t w = succ.size(); w-- > 0;) packed = (packed << succ.size()) | succ[w];
    return packed;
}

inline std::vector<Mask> unpack_frame(std::uint64_t packed, std::size_t n) {
    std::vector<Mask> succ(n);
    for (std::size_t w = 0; w < n; ++w) succ[w] = static_cast<Mask>((packed >> (w * n)) & ((1U << n) - 1));
    return succ;
}

// Relabelings of 1..n-1 (world 0 fixed), each with a table mapping a
// successor mask to its image.
struct Relabeling {
    std::vector<std::size_t> perm;
    std::vector<Mask> image;
};

inline std::vector<Relabeling> root_fixing_relabelings(std::size_t n) {
    std::vector<Relabeling> out;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    do {
        Relabeling r{perm, std::vector<Mask>(std::size_t{1} << n, 0)};
        for (Mask m = 0; m < (Mask{1} << n); ++m)
            for (std::size_t v = 0; v < n; ++v)
                if (m >> v & 1U) r.image[m] |= Mask{1} << perm[v];
        out.push_back(std::move(r));
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return out;
}

// Smallest packing over all relabelings that keep world 0 fixed.
inline std::uint64_t min_packing(const std::vector<Mask>& succ, const std::vector<Relabeling>& relabelings) {
    const std::size_t n = succ.size();
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const Relabeling& r : relabelings) {
        std::uint64_t packed = 0;
        for (std::size_t w = 0; w < n; ++w) packed |= std::uint64_t{r.image[succ[w]]} << (r.perm[w] * n);
        best = std::min(best, packed);
    }
    return best;
}

inline std::uint64_t min_packing(const std::vector<Mask>& succ) {
    return min_packing(succ, root_fixing_relabelings(succ.size()));
}

/// One frame per isomorphism class (root fixed) of total frames on n worlds
/// with every world reachable from 0: the member with the smallest packed
/// relation, listed in ascending packed order.
inline const std::vector<Frame>& canonical_frames(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::vector<Frame>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (n == 0 || n > kMaxEnumeratedWorlds) throw LimitError("frame enumeration limited to 1.." +
                                                             std::to_string(kMaxEnumeratedWorlds) + " worlds");
    const auto relabelings = root_fixing_relabelings(n);
    std::vector<std::uint64_t> classes;
    const Mask full = (Mask{1} << n) - 1;
    std::vector<Mask> succ(n, 1);
    while (true) {
        if (is_bfs_ordered_frame(succ)) classes.push_back(min_packing(succ, relabelings));
        std::size_t i = 0;
        while (i < n && succ[i] == full) succ[i++] = 1;
        if (i == n) break;
        ++succ[i];
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::vector<Frame> frames;
    frames.reserve(classes.size());
    for (std::uint64_t packed : classes) frames.push_back(Frame{unpack_frame(packed, n)});
    return cache.emplace(n, std::move(frames)).first->second;
}

/// Post-order program over the distinct subformulas, evaluated on world masks.
class MaskEvaluator {
public:
    explicit MaskEvaluator(const Formula& f) {
        for (const auto& p : propositions(f)) prop_index_.emplace(p, prop_names_.size()), prop_names_.push_back(p);
        root_ = compile(f);
    }

    const std::vector<std::string>& props() const { return prop_names_; }

    /// Satisfying world set; `prop_masks[j]` is the world set labeled with prop j.
    Mask eval(const std::vector<Mask>& succ, const std::vector<Mask>& prop_masks,
              std::vector<Mask>& scratch) const {
        const std::size_t n = succ.size();
        const Mask full = (Mask{1} << n) - 1;
        scratch.resize(ops_.size());
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const Op& op = ops_[i];
            const Mask a = op.a >= 0 ? scratch[op.a] : 0;
            const Mask b = op.b >= 0 ? scratch[op.b] : 0;
            Mask r = 0;
            switch (op.code) {
            case Code::True: r = full; break;
            case Code::False: r = 0; break;
            case Code::Prop: r = prop_masks[op.prop]; break;
            case Code::Not: r = ~a & full; break;
            case Code::And: r = a & b; break;
            case Code::Or: r = a | b; break;
            case Code::Implies: r = (~a | b) & full; break;
            case Code::Iff: r = ~(a ^ b) & full; break;
            case Code::AX: r = pre_all(succ, a); break;
            case Code::EX: r = pre_some(succ, a); break;
            case Code::EF: r = lfp(succ, full, a, false); break;
            case Code::AF: r = lfp(succ, full, a, true); break;
            case Code::EU: r = lfp(succ, a, b, false); break;
            case Code::AU: r = lfp(succ, a, b, true); break;
            case Code::EG: r = gfp(succ, a, false); break;
            case Code::AG: r = gfp(succ, a, true); break;
            }
            scratch[i] = r;
        }
        return scratch[root_];
    }

    /// Evaluation over many labelings at once. Bit i of word k stands for
    /// labeling 64k+i; `patterns[w * P + j]` marks the labelings that put
    /// prop j at world w. Returns the satisfaction vector of world 0 (`words`
    /// words inside `store`).
    const std::uint64_t* eval_labelings(const std::vector<Mask>& succ, std::size_t words,
                                        const std::vector<const std::uint64_t*>& patterns,
                                        std::vector<std::uint64_t>& store) const {
        const std::size_t n = succ.size(), props = prop_names_.size();
        store.resize(ops_.size() * n * words);
        auto at = [&](std::size_t op, std::size_t w) { return store.data() + (op * n + w) * words; };
        const std::uint64_t ones = ~std::uint64_t{0};
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const Op& op = ops_[i];
            for (std::size_t w = 0; w < n; ++w) {
                std::uint64_t* r = at(i, w);
                const std::uint64_t* a = op.a >= 0 ? at(op.a, w) : nullptr;
                const std::uint64_t* b = op.b >= 0 ? at(op.b, w) : nullptr;
                switch (op.code) {
                case Code::True: std::fill(r, r + words, ones); break;
                case Code::False: std::fill(r, r + words, 0); break;
                case Code::Prop: std::copy(patterns[w * props + op.prop], patterns[w * props + op.prop] + words, r); break;
                case Code::Not: for (std::size_t k = 0; k < words; ++k) r[k] = ~a[k]; break;
                case Code::And: for (std::size_t k = 0; k < words; ++k) r[k] = a[k] & b[k]; break;
                case Code::Or: for (std::size_t k = 0; k < words; ++k) r[k] = a[k] | b[k]; break;
                case Code::Implies: for (std::size_t k = 0; k < words; ++k) r[k] = ~a[k] | b[k]; break;
                case Code::Iff: for (std::size_t k = 0; k < words; ++k) r[k] = ~(a[k] ^ b[k]); break;
                case Code::AX:
                case Code::EX: {
                    const bool all = op.code == Code::AX;
                    std::fill(r, r + words, all ? ones : 0);
                    for (std::size_t v = 0; v < n; ++v) {
                        if (!(succ[w] >> v & 1U)) continue;
                        const std::uint64_t* s = at(op.a, v);
                        for (std::size_t k = 0; k < words; ++k) r[k] = all ? (r[k] & s[k]) : (r[k] | s[k]);
                    }
                    break;
                }
                default: break;  // fixpoints below, once all worlds of the operands exist
                }
            }
            switch (op.code) {
            case Code::EF: fixpoint(succ, words, store, at, i, -1, op.a, false, true); break;
            case Code::AF: fixpoint(succ, words, store, at, i, -1, op.a, true, true); break;
            case Code::EU: fixpoint(succ, words, store, at, i, op.a, op.b, false, true); break;
            case Code::AU: fixpoint(succ, words, store, at, i, op.a, op.b, true, true); break;
            case Code::EG: fixpoint(succ, words, store, at, i, op.a, -1, false, false); break;
            case Code::AG: fixpoint(succ, words, store, at, i, op.a, -1, true, false); break;
            default: break;
            }
        }
        return at(static_cast<std::size_t>(root_), 0);
    }

private:
    enum class Code { True, False, Prop, Not, And, Or, Implies, Iff, AX, EX, AF, EF, AG, EG, AU, EU };
    struct Op {
        Code code;
        int a = -1;
        int b = -1;
        std::size_t prop = 0;
    };

    static Mask pre_all(const std::vector<Mask>& succ, Mask s) {
        Mask r = 0;
        for (std::size_t w = 0; w < succ.size(); ++w)
            if ((succ[w] & ~s) == 0) r |= Mask{1} << w;
        return r;
    }
    static Mask pre_some(const std::vector<Mask>& succ, Mask s) {
        Mask r = 0;
        for (std::size_t w = 0; w < succ.size(); ++w)
            if (succ[w] & s) r |= Mask{1} << w;
        return r;
    }
    static Mask lfp(const std::vector<Mask>& succ, Mask a, Mask b, bool universal) {
        Mask r = b;
        while (true) {
            const Mask next = r | (a & (universal ? pre_all(succ, r) : pre_some(succ, r)));
            if (next == r) return r;
            r = next;
        }
    }
    static Mask gfp(const std::vector<Mask>& succ, Mask s, bool universal) {
        Mask r = s;
        while (true) {
            const Mask next = r & (universal ? pre_all(succ, r) : pre_some(succ, r));
            if (next == r) return r;
            r = next;
        }
    }

    // Chaotic iteration of R = b | (a & pre(R)) (least) or R = a & pre(R)
    // (greatest); a missing `a` stands for true.
    template <class At>
    static void fixpoint(const std::vector<Mask>& succ, std::size_t words, std::vector<std::uint64_t>&, At at,
                         std::size_t out, int a, int b, bool universal, bool least) {
        const std::size_t n = succ.size();
        const std::uint64_t ones = ~std::uint64_t{0};
        for (std::size_t w = 0; w < n; ++w) {
            std::uint64_t* r = at(out, w);
            if (least) std::copy(at(b, w), at(b, w) + words, r);
            else std::copy(at(a, w), at(a, w) + words, r);
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t w = 0; w < n; ++w) {
                std::uint64_t* r = at(out, w);
                const std::uint64_t* guard = a >= 0 ? at(a, w) : nullptr;
                for (std::size_t k = 0; k < words; ++k) {
                    std::uint64_t pre = universal ? ones : 0;
                    for (std::size_t v = 0; v < n; ++v)
                        if (succ[w] >> v & 1U) pre = universal ? (pre & at(out, v)[k]) : (pre | at(out, v)[k]);
                    const std::uint64_t next = least ? (r[k] | ((guard ? guard[k] : ones) & pre)) : (r[k] & pre);
                    if (next != r[k]) r[k] = next, changed = true;
                }
            }
        }
    }

    int compile(const Formula& f) {
        const std::string key = f.to_string();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Op op{Code::True};
        switch (f.kind()) {
        case Kind::True: op.code = Code::True; break;
        case Kind::False: op.code = Code::False; break;
        case Kind::Prop:
            op.code = Code::Prop;
            op.prop = prop_index_.at(f.name());
            break;
        case Kind::Not: op.code = Code::Not; break;
        case Kind::And: op.code = Code::And; break;
        case Kind::Or: op.code = Code::Or; break;
        case Kind::Implies: op.code = Code::Implies; break;
        case Kind::Iff: op.code = Code::Iff; break;
        case Kind::Temporal:
        case Kind::Until: {
            static constexpr Code codes[] = {Code::AX, Code::EX, Code::AF, Code::EF,
                                             Code::AG, Code::EG, Code::AU, Code::EU};
            op.code = codes[static_cast<std::size_t>(f.op())];
            break;
        }
        }
        if (f.arity() > 0) op.a = compile(f.child(0));
        if (f.arity() > 1) op.b = compile(f.child(1));
        ops_.push_back(op);
        const int id = static_cast<int>(ops_.size() - 1);
        memo_.emplace(key, id);
        return id;
    }

    std::vector<Op> ops_;
    std::unordered_map<std::string, int> memo_;
    std::map<std::string, std::size_t> prop_index_;
    std::vector<std::string> prop_names_;
    int root_ = 0;
};

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

// Labelings are evaluated bit-parallel when worlds * props is at most this.
inline constexpr std::size_t kBitParallelLabelBits = 18;

// patterns[b] marks the labeling indices whose bit b is set.
inline std::vector<std::vector<std::uint64_t>> labeling_patterns(std::size_t bits) {
    const std::size_t words = bits <= 6 ? 1 : std::size_t{1} << (bits - 6);
    std::vector<std::vector<std::uint64_t>> patterns(bits, std::vector<std::uint64_t>(words, 0));
    static constexpr std::uint64_t low[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                             0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    for (std::size_t b = 0; b < bits; ++b)
        for (std::size_t k = 0; k < words; ++k)
            patterns[b][k] = b < 6 ? low[b] : (((k >> (b - 6)) & 1U) ? ~std::uint64_t{0} : 0);
    return patterns;
}

} // namespace detail

/// Searches all total Kripke structures with up to `max_worlds` worlds over
/// the propositions of `f` for one whose world 0 satisfies `f`. Frames are
/// taken one per isomorphism class (world 0 fixed); every labeling of every
/// such frame is a candidate. Sizes are tried in ascending order, then
/// frames by packed relation, then labelings; the witness is the first
/// satisfying candidate in that order irrespective of the worker count.
inline BruteForceResult brute_force_sat(const Formula& f, std::size_t max_worlds,
                                        const BruteForceOptions& options = {}) {
    if (max_worlds < 1) throw Error("brute_force_sat: max_worlds must be at least 1");
    const detail::MaskEvaluator evaluator(f);
    const std::size_t props = evaluator.props().size();
    BruteForceResult result;
    std::uint64_t remaining = options.budget;

    for (std::size_t n = 1; n <= max_worlds; ++n) {
        if (n > kMaxEnumeratedWorlds) {
            result.status = SearchStatus::BudgetExhausted;
            return result;
        }
        const auto& frames = detail::canonical_frames(n);
        const std::size_t label_bits = props * n;
        const std::uint64_t labelings =
            label_bits >= 63 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << label_bits;
        const std::uint64_t total = detail::saturating_mul(frames.size(), labelings);
        const std::uint64_t limit = std::min(total, remaining);
        const bool parallel_labels = options.bit_parallel && label_bits <= detail::kBitParallelLabelBits;
        std::vector<std::vector<std::uint64_t>> patterns;
        std::vector<const std::uint64_t*> pattern_ptrs;
        if (parallel_labels) {
            patterns = detail::labeling_patterns(label_bits);
            for (const auto& pat : patterns) pattern_ptrs.push_back(pat.data());
        }
        const std::size_t words = label_bits <= 6 ? 1 : std::size_t{1} << (label_bits - 6);

        // Best (frame, labeling) so far, packed as a candidate index.
        std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
        std::atomic<std::uint64_t> examined{0};
        auto work = [&](std::size_t first, std::size_t stride) {
            std::vector<detail::Mask> prop_masks(props), scratch;
            std::vector<std::uint64_t> store;
            std::uint64_t local = 0;
            for (std::size_t fi = first; fi < frames.size(); fi += stride) {
                const std::uint64_t base = detail::saturating_mul(fi, labelings);
                if (base >= limit || base >= best.load(std::memory_order_relaxed)) break;
                const std::uint64_t end = std::min(labelings, limit - base);
                std::uint64_t found = end;
                if (parallel_labels) {
                    const std::uint64_t* root = evaluator.eval_labelings(frames[fi].succ, words, pattern_ptrs, store);
                    for (std::uint64_t k = 0; k * 64 < end; ++k) {
                        std::uint64_t bitsk = root[k];
                        if (end - k * 64 < 64) bitsk &= (std::uint64_t{1} << (end - k * 64)) - 1;
                        if (bitsk) {
                            found = k * 64 + static_cast<std::uint64_t>(__builtin_ctzll(bitsk));
                            break;
                        }
                    }
                    local += found == end ? end : found + 1;
                } else {
                    for (std::uint64_t lab = 0; lab < end; ++lab) {
                        ++local;
                        for (std::size_t j = 0; j < props; ++j) {
                            detail::Mask m = 0;
                            for (std::size_t w = 0; w < n; ++w)
                                if (lab >> (w * props + j) & 1U) m |= detail::Mask{1} << w;
                            prop_masks[j] = m;
                        }
                        if (evaluator.eval(frames[fi].succ, prop_masks, scratch) & 1U) {
                            found = lab;
                            break;
                        }
                    }
                }
                if (found != end) {
                    const std::uint64_t cand = base + found;
                    std::uint64_t cur = best.load();
                    while (cand < cur && !best.compare_exchange_weak(cur, cand)) {
                    }
                }
            }
            examined += local;
        };
        const unsigned workers = std::max(1U, options.workers);
        if (workers == 1) {
            work(0, 1);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
            for (auto& th : pool) th.join();
        }
        result.candidates += examined.load();
        remaining -= std::min(remaining, limit);

        if (best.load() != std::numeric_limits<std::uint64_t>::max()) {
            const std::uint64_t idx = best.load();
            const auto& frame = frames[idx / labelings];
            const std::uint64_t lab = idx % labelings;
            KripkeStructure k(n);
            for (const auto& p : evaluator.props()) k.declare_proposition(p);
            for (std::size_t w = 0; w < n; ++w) {
                for (std::size_t v = 0; v < n; ++v)
                    if (frame.succ[w] >> v & 1U) k.add_edge(w, v);
                for (std::size_t j = 0; j < props; ++j)
                    if (lab >> (w * props + j) & 1U) k.label(w, evaluator.props()[j]);
            }
            result.status = SearchStatus::Satisfiable;
            result.witness = std::move(k);
            result.witness_world = 0;
            return result;
        }
        if (limit < total) {
            result.status = SearchStatus::BudgetExhausted;
            return result;
        }
        result.complete_up_to = n;
    }
    result.status = SearchStatus::NoModelUpToBound;
    return result;
}

// ---------------------------------------------------------------------------
// CTL({AX,EX}) in NNF

inline bool in_ax_ex_nnf(const Formula& f) {
    return is_nnf(f) && operator_set(f).subset_of({CtlOp::AX, CtlOp::EX});
}

/// World count of the largest tree model the depth-bounded search can need:
/// level j+1 has at most max(1, e_j) children per level-j world, e_j being
/// the number of distinct EX-subformulas occurring under exactly j
/// next-operators.
inline std::size_t tree_model_world_bound(const Formula& f) {
    if (!in_ax_ex_nnf(f)) throw FragmentError("tree_model_world_bound: expected NNF CTL({AX,EX})");
    const std::size_t td = temporal_depth(f);
    std::vector<std::unordered_set<std::string>> ex_at(td + 1);
    auto visit = [&](auto&& self, const Formula& g, std::size_t depth) -> void {
        if (g.kind() == Kind::Temporal) {
            if (g.op() == CtlOp::EX) ex_at[depth].insert(g.to_string());
            self(self, g.child(0), depth + 1);
            return;
        }
        for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i), depth);
    };
    visit(visit, f, 0);
    std::size_t total = 0, level = 1;
    for (std::size_t j = 0; j <= td; ++j) {
        total += level;
        level *= std::max<std::size_t>(1, ex_at[j].size());
    }
    return total;
}

namespace detail {

struct TreeWitness {
    std::set<std::string> props;
    std::vector<TreeWitness> children;  // empty: the world carries a self-loop
};

class TreeSearch {
public:
    std::optional<TreeWitness> solve(std::vector<Formula> todo, std::size_t depth) {
        return expand(std::move(todo), {}, {}, {}, {}, depth, false);
    }

private:
    // Saturates the Boolean part of `todo`, then either closes the world with
    // a self-loop or creates one child per EX-obligation (one child when there
    // are only AX-obligations).
    std::optional<TreeWitness> expand(std::vector<Formula> todo, std::set<std::string> pos,
                                      std::set<std::string> neg, std::vector<Formula> ax,
                                      std::vector<Formula> ex, std::size_t depth, bool self_loop) {
        while (!todo.empty()) {
            Formula g = todo.back();
            todo.pop_back();
            switch (g.kind()) {
            case Kind::True: break;
            case Kind::False: return std::nullopt;
            case Kind::Prop:
                if (neg.count(g.name())) return std::nullopt;
                pos.insert(g.name());
                break;
            case Kind::Not:
                if (g.child(0).kind() != Kind::Prop) throw FragmentError("bounded_tree_sat: formula not in NNF");
                if (pos.count(g.child(0).name())) return std::nullopt;
                neg.insert(g.child(0).name());
                break;
            case Kind::And:
                todo.push_back(g.child(1));
                todo.push_back(g.child(0));
                break;
            case Kind::Or: {
                for (std::size_t side = 0; side < 2; ++side) {
                    auto branch = todo;
                    branch.push_back(g.child(side));
                    if (auto r = expand(std::move(branch), pos, neg, ax, ex, depth, self_loop)) return r;
                }
                return std::nullopt;
            }
            case Kind::Temporal:
                if (self_loop) {
                    // On a world whose only successor is itself, AX g == EX g == g.
                    todo.push_back(g.child(0));
                } else if (g.op() == CtlOp::AX) {
                    ax.push_back(g.child(0));
                } else if (g.op() == CtlOp::EX) {
                    ex.push_back(g.child(0));
                } else {
                    throw FragmentError("bounded_tree_sat: only AX and EX are supported");
                }
                break;
            default: throw FragmentError("bounded_tree_sat: formula not in NNF CTL({AX,EX})");
            }
        }
        if (self_loop || (ax.empty() && ex.empty())) return TreeWitness{std::move(pos), {}};
        if (depth == 0) {
            std::vector<Formula> obligations = ax;
            obligations.insert(obligations.end(), ex.begin(), ex.end());
            return expand(std::move(obligations), std::move(pos), std::move(neg), {}, {}, 0, true);
        }
        TreeWitness node{std::move(pos), {}};
        if (ex.empty()) {
            auto child = solve(ax, depth - 1);
            if (!child) return std::nullopt;
            node.children.push_back(std::move(*child));
            return node;
        }
        for (const Formula& e : ex) {
            std::vector<Formula> goals = ax;
            goals.push_back(e);
            auto child = solve(std::move(goals), depth - 1);
            if (!child) return std::nullopt;
            node.children.push_back(std::move(*child));
        }
        return node;
    }
};

} // namespace detail

struct TreeModel {
    KripkeStructure structure;
    std::size_t root = 0;
    /// Maximal distance from the root.
    std::size_t depth = 0;
};

/// A tree-shaped model of `f` of depth at most `depth` whose leaves carry
/// self-loops, if one exists. `f` must be NNF over {AX, EX}.
inline std::optional<TreeModel> bounded_tree_model(const Formula& f, std::size_t depth) {
    if (!in_ax_ex_nnf(f)) throw FragmentError("bounded_tree_sat: expected NNF CTL({AX,EX}), got " + f.to_string());
    auto tree = detail::TreeSearch().solve({f}, depth);
    if (!tree) return std::nullopt;
    TreeModel model;
    for (const auto& p : propositions(f)) model.structure.declare_proposition(p);
    auto build = [&](auto&& self, const detail::TreeWitness& t, std::size_t level) -> std::size_t {
        const std::size_t w = model.structure.add_world();
        model.depth = std::max(model.depth, level);
        for (const auto& p : t.props) model.structure.label(w, p);
        if (t.children.empty()) model.structure.add_edge(w, w);
        for (const auto& c : t.children) model.structure.add_edge(w, self(self, c, level + 1));
        return w;
    };
    model.root = build(build, *tree, 0);
    return model;
}

inline bool bounded_tree_sat(const Formula& f, std::size_t depth) {
    return bounded_tree_model(f, depth).has_value();
}

} // namespace ctlfrag
