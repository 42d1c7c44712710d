#ifndef BNLEARN_SEARCH_HPP
#define BNLEARN_SEARCH_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "estimation.hpp"
#include "model.hpp"
#include "scoring.hpp"
#include "stats.hpp"

namespace bnlearn {

/// A permutation of variable indices; position 0 comes first.
class Ordering {
public:
    Ordering() = default;

    explicit Ordering(std::vector<VarIndex> order) : order_(std::move(order)), position_(order_.size()) {
        std::vector<char> seen(order_.size(), 0);
        for (std::size_t pos = 0; pos < order_.size(); ++pos) {
            VarIndex v = order_[pos];
            if (v >= order_.size() || seen[v]) throw Error("ordering is not a permutation");
            seen[v] = 1;
            position_[v] = pos;
        }
    }

    static Ordering identity(std::size_t n) {
        std::vector<VarIndex> order(n);
        std::iota(order.begin(), order.end(), VarIndex{0});
        return Ordering(std::move(order));
    }

    std::size_t size() const noexcept { return order_.size(); }
    VarIndex operator[](std::size_t pos) const { return order_[pos]; }
    std::size_t position(VarIndex v) const { return position_.at(v); }
    const std::vector<VarIndex>& order() const noexcept { return order_; }

    /// True iff every arc of `s` goes from an earlier to a later position.
    bool obeyed_by(const NetworkStructure& s) const {
        for (VarIndex i = 0; i < s.size(); ++i) {
            for (VarIndex p : s.parents(i)) {
                if (position(p) >= position(i)) return false;
            }
        }
        return true;
    }

private:
    std::vector<VarIndex> order_;
    std::vector<std::size_t> position_;
};

struct SearchOptions {
    std::optional<std::size_t> max_parents;
    /// Algorithm B only: recheck every live delta-matrix entry at the start
    /// of each iteration and throw std::logic_error on a mismatch.
    bool verify_delta_matrix = false;
};

struct ArcAddition {
    VarIndex parent = 0;
    VarIndex child = 0;
    double delta = 0.0;        // gain of the addition
    double child_score = 0.0;  // m_child after the addition
};

struct SearchResult {
    NetworkStructure structure;
    double score = 0.0;
    std::vector<ArcAddition> trace;
    std::size_t node_score_evaluations = 0;
};

namespace detail {

inline void check_searchable(const Database& db) {
    if (db.case_count() == 0) throw ZeroCasesError("structure search needs at least one case");
}

inline bool scores_tie(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline ParentSet mask_to_set(std::uint32_t mask) {
    ParentSet s;
    for (VarIndex v = 0; mask != 0; ++v, mask >>= 1) {
        if (mask & 1u) s.push_back(v);
    }
    return s;
}

// Fewer parents first, then lexicographically smaller index list.
inline bool smaller_parent_set(std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    const std::uint32_t diff = a ^ b;
    if (diff == 0) return false;
    return (a & (diff & (~diff + 1))) != 0;
}

struct Choice {
    double score = -std::numeric_limits<double>::infinity();
    std::uint32_t mask = 0;
};

inline bool better_choice(const Choice& a, const Choice& b) {
    if (scores_tie(a.score, b.score)) return smaller_parent_set(a.mask, b.mask);
    return a.score > b.score;
}

// All descendants of v (inclusive) under mutable parent sets.
inline std::vector<char> closure(VarIndex v, const std::vector<std::vector<VarIndex>>& next) {
    std::vector<char> in(next.size(), 0);
    std::vector<VarIndex> stack{v};
    in[v] = 1;
    while (!stack.empty()) {
        VarIndex u = stack.back();
        stack.pop_back();
        for (VarIndex w : next[u]) {
            if (!in[w]) {
                in[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return in;
}

inline SearchResult finish(const Database& db, std::vector<ParentSet> parents, std::vector<double> node_scores,
                           std::vector<ArcAddition> trace, std::size_t evaluations) {
    SearchResult r{NetworkStructure(db.variables(), std::move(parents)), 0.0, std::move(trace), evaluations};
    for (double s : node_scores) r.score += s;
    return r;
}

}  // namespace detail

/// Greedy per-node parent growth under a fixed ordering (K2). Candidates for
/// a node are its predecessors in the ordering; the one maximizing the new
/// node score is added while that strictly improves the score.
inline SearchResult k2(const Database& db, const Ordering& ord, Measure m, const SearchOptions& opts = {}) {
    if (ord.size() != db.variable_count()) throw SchemaMismatchError("ordering size does not match database");
    detail::check_searchable(db);
    const std::size_t n = db.variable_count();
    const std::size_t cap = opts.max_parents.value_or(n);
    NodeScorer scorer(db, m);
    std::vector<ParentSet> parents(n);
    std::vector<double> node_scores(n);
    std::vector<ArcAddition> trace;

    for (std::size_t pos = 0; pos < n; ++pos) {
        const VarIndex v = ord[pos];
        ParentSet& pi = parents[v];
        double current = scorer(v, pi);
        std::vector<VarIndex> pool(ord.order().begin(), ord.order().begin() + static_cast<std::ptrdiff_t>(pos));
        std::sort(pool.begin(), pool.end());
        while (pi.size() < cap && pi.size() < pool.size()) {
            std::optional<VarIndex> best;
            double best_g = -std::numeric_limits<double>::infinity();
            for (VarIndex y : pool) {
                if (std::binary_search(pi.begin(), pi.end(), y)) continue;
                ParentSet trial = pi;
                trial.insert(std::upper_bound(trial.begin(), trial.end(), y), y);
                const double g = scorer(v, trial);
                if (!best || g > best_g) {
                    best = y;
                    best_g = g;
                }
            }
            const double delta = best_g - current;
            if (!(delta > 0.0)) break;
            pi.insert(std::upper_bound(pi.begin(), pi.end(), *best), *best);
            current = best_g;
            trace.push_back({*best, v, delta, current});
        }
        node_scores[v] = current;
    }
    return detail::finish(db, std::move(parents), std::move(node_scores), std::move(trace), scorer.evaluations());
}

/// Sentinel for an arc that may not be added.
inline constexpr double kObstructed = -std::numeric_limits<double>::infinity();

/// Ordering-free greedy arc addition (algorithm B). delta(i, j) holds the gain
/// of adding x_j -> x_i; arcs that would close a cycle are obstructed.
inline SearchResult algorithm_b(const Database& db, Measure m, const SearchOptions& opts = {}) {
    detail::check_searchable(db);
    const std::size_t n = db.variable_count();
    const std::size_t cap = opts.max_parents.value_or(n);
    NodeScorer scorer(db, m);
    std::vector<ParentSet> parents(n);
    std::vector<std::vector<VarIndex>> children(n);
    std::vector<double> current(n);
    std::vector<double> delta(n * n, kObstructed);
    std::vector<ArcAddition> trace;
    auto at = [&](VarIndex i, VarIndex j) -> double& { return delta[i * n + j]; };

    for (VarIndex i = 0; i < n; ++i) current[i] = scorer(i, {});
    if (cap > 0) {
        for (VarIndex i = 0; i < n; ++i) {
            for (VarIndex j = 0; j < n; ++j) {
                if (i != j) at(i, j) = scorer(i, {j}) - current[i];
            }
        }
    }

    auto verify = [&] {
        NodeScorer fresh(db, m);
        for (VarIndex i = 0; i < n; ++i) {
            if (at(i, i) != kObstructed) throw std::logic_error("delta matrix diagonal not obstructed");
            for (VarIndex j = 0; j < n; ++j) {
                if (at(i, j) == kObstructed) continue;
                ParentSet trial = parents[i];
                trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
                const double expect = fresh(i, trial) - fresh(i, parents[i]);
                if (std::abs(expect - at(i, j)) > 1e-9 * std::max(1.0, std::abs(expect))) {
                    throw std::logic_error("stale delta matrix entry");
                }
            }
        }
    };

    while (true) {
        if (opts.verify_delta_matrix) verify();
        VarIndex bi = 0;
        VarIndex bj = 0;
        double best = kObstructed;
        for (VarIndex i = 0; i < n; ++i) {
            for (VarIndex j = 0; j < n; ++j) {
                if (at(i, j) > best) {
                    best = at(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!(best > 0.0)) break;

        ParentSet& pi = parents[bi];
        pi.insert(std::upper_bound(pi.begin(), pi.end(), bj), bj);
        children[bj].push_back(bi);
        const double updated = scorer(bi, pi);
        trace.push_back({bj, bi, updated - current[bi], updated});
        current[bi] = updated;

        // Any arc b -> a with a an ancestor of bi (or bi) and b a descendant
        // of bi (or bi) would now close a cycle.
        const auto up = detail::closure(bi, parents);
        const auto down = detail::closure(bi, children);
        for (VarIndex a = 0; a < n; ++a) {
            if (!up[a]) continue;
            for (VarIndex b = 0; b < n; ++b) {
                if (down[b]) at(a, b) = kObstructed;
            }
        }
        at(bi, bj) = kObstructed;
        for (VarIndex k = 0; k < n; ++k) {
            if (at(bi, k) == kObstructed) continue;
            if (pi.size() >= cap) {
                at(bi, k) = kObstructed;
                continue;
            }
            ParentSet trial = pi;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), k), k);
            at(bi, k) = scorer(bi, trial) - current[bi];
        }
    }
    return detail::finish(db, std::move(parents), std::move(current), std::move(trace), scorer.evaluations());
}

/// Largest variable count accepted by exhaustive_best.
inline constexpr std::size_t kMaxExhaustiveVariables = 8;

/// Best subset of `candidates` as parent set of i. Ties go to fewer parents,
/// then to the lexicographically smaller index list.
inline ParentSet best_parent_set(NodeScorer& scorer, VarIndex i, std::span<const VarIndex> candidates,
                                 std::optional<std::size_t> max_parents = std::nullopt) {
    if (candidates.size() > 20) throw SizeError("too many candidate parents for subset enumeration");
    detail::Choice best;
    const std::uint32_t subsets = std::uint32_t{1} << candidates.size();
    for (std::uint32_t sub = 0; sub < subsets; ++sub) {
        ParentSet ps;
        std::uint32_t mask = 0;
        for (std::size_t t = 0; t < candidates.size(); ++t) {
            if (sub & (std::uint32_t{1} << t)) {
                ps.push_back(candidates[t]);
                mask |= std::uint32_t{1} << candidates[t];
            }
        }
        if (max_parents && ps.size() > *max_parents) continue;
        detail::Choice c{scorer(i, ps), mask};
        if (detail::better_choice(c, best)) best = c;
    }
    return detail::mask_to_set(best.mask);
}

/// Highest-scoring structure among those obeying `ord`. Decomposability makes
/// this the per-node best subset of predecessors.
inline SearchResult exhaustive_for_ordering(const Database& db, const Ordering& ord, Measure m,
                                            const SearchOptions& opts = {}) {
    if (ord.size() != db.variable_count()) throw SchemaMismatchError("ordering size does not match database");
    detail::check_searchable(db);
    if (db.variable_count() > 21) throw TooManyVariablesError("ordering-restricted search limited to 21 variables");
    const std::size_t n = db.variable_count();
    NodeScorer scorer(db, m);
    std::vector<ParentSet> parents(n);
    std::vector<double> scores(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const VarIndex v = ord[pos];
        std::vector<VarIndex> pool(ord.order().begin(), ord.order().begin() + static_cast<std::ptrdiff_t>(pos));
        std::sort(pool.begin(), pool.end());
        parents[v] = best_parent_set(scorer, v, pool, opts.max_parents);
        scores[v] = scorer(v, parents[v]);
    }
    return detail::finish(db, std::move(parents), std::move(scores), {}, scorer.evaluations());
}

/// Global optimum over all DAGs. Every DAG obeys some ordering, so the
/// optimum is the best over orderings of the per-node best predecessor
/// subset. Node scores are computed once per (node, parent set), so at most
/// n * 2^(n-1) evaluations. Ties go to the lexicographically smallest
/// ordering, then to the smallest parent sets.
inline SearchResult exhaustive_best(const Database& db, Measure m, const SearchOptions& opts = {}) {
    const std::size_t n = db.variable_count();
    if (n > kMaxExhaustiveVariables) {
        throw TooManyVariablesError("exhaustive search supports at most " +
                                    std::to_string(kMaxExhaustiveVariables) + " variables");
    }
    detail::check_searchable(db);
    NodeScorer scorer(db, m);
    const std::uint32_t full = std::uint32_t{1} << n;

    // best[i][mask]: best parent set of i drawn from mask (mask excludes i).
    std::vector<std::vector<detail::Choice>> best(n, std::vector<detail::Choice>(full));
    for (VarIndex i = 0; i < n; ++i) {
        const std::uint32_t self = std::uint32_t{1} << i;
        for (std::uint32_t mask = 0; mask < full; ++mask) {
            if (mask & self) continue;
            detail::Choice c;
            if (!opts.max_parents || static_cast<std::size_t>(std::popcount(mask)) <= *opts.max_parents) {
                c = {scorer(i, detail::mask_to_set(mask)), mask};
            }
            for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
                const std::uint32_t bit = rest & (~rest + 1);
                const auto& sub = best[i][mask & ~bit];
                if (detail::better_choice(sub, c)) c = sub;
            }
            best[i][mask] = c;
        }
    }

    std::vector<VarIndex> perm(n);
    std::iota(perm.begin(), perm.end(), VarIndex{0});
    std::vector<VarIndex> best_perm = perm;
    double best_total = -std::numeric_limits<double>::infinity();
    bool first = true;
    do {
        double total = 0.0;
        std::uint32_t before = 0;
        for (VarIndex v : perm) {
            total += best[v][before].score;
            before |= std::uint32_t{1} << v;
        }
        if (first || (total > best_total && !detail::scores_tie(total, best_total))) {
            best_total = total;
            best_perm = perm;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<ParentSet> parents(n);
    std::vector<double> scores(n);
    std::uint32_t before = 0;
    for (VarIndex v : best_perm) {
        parents[v] = detail::mask_to_set(best[v][before].mask);
        scores[v] = best[v][before].score;
        before |= std::uint32_t{1} << v;
    }
    return detail::finish(db, std::move(parents), std::move(scores), {}, scorer.evaluations());
}

/// Mixes, for every variable, the direct estimates of the chain of parent
/// sets it passed through during the search (the empty set first), each
/// weighted by 2^score.
inline BayesNet weighted_network(const Database& db, Measure m, const SearchResult& search) {
    const std::size_t n = db.variable_count();
    std::vector<std::vector<VarIndex>> added(n);
    for (const auto& a : search.trace) added[a.child].push_back(a.parent);
    std::vector<Cpt> cpts;
    cpts.reserve(n);
    for (VarIndex i = 0; i < n; ++i) {
        WeightedParentSetFamily family;
        ParentSet pi;
        auto add = [&] {
            auto counts = count(db, i, pi);
            const double score = node_score(counts, m);
            family.add(score, std::move(counts));
        };
        add();
        for (VarIndex p : added[i]) {
            pi.insert(std::upper_bound(pi.begin(), pi.end(), p), p);
            add();
        }
        if (pi != search.structure.parents(i)) throw std::logic_error("search trace does not match structure");
        cpts.push_back(weighted_estimate(family));
    }
    return BayesNet(search.structure, std::move(cpts));
}

inline BayesNet weighted_k2(const Database& db, const Ordering& ord, Measure m, const SearchOptions& opts = {}) {
    return weighted_network(db, m, k2(db, ord, m, opts));
}

inline BayesNet weighted_b(const Database& db, Measure m, const SearchOptions& opts = {}) {
    return weighted_network(db, m, algorithm_b(db, m, opts));
}

}  // namespace bnlearn

#endif  // BNLEARN_SEARCH_HPP
