// Independent reference implementations used only by the tests. None of
// these share code paths with the library routine they check.
#ifndef BNLEARN_TESTS_ORACLES_HPP
#define BNLEARN_TESTS_ORACLES_HPP

#include <bnlearn/bnlearn.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <vector>

namespace oracle {

using bnlearn::VarIndex;

/// d-separation by enumerating every simple trail between each x and y and
/// applying the two blocking conditions literally.
inline bool d_separated_by_trails(const bnlearn::NetworkStructure& s, const std::vector<VarIndex>& xs,
                                  const std::vector<VarIndex>& zs, const std::vector<VarIndex>& ys) {
    const std::size_t n = s.size();
    std::vector<std::vector<VarIndex>> neighbours(n);
    for (VarIndex i = 0; i < n; ++i) {
        for (VarIndex p : s.parents(i)) {
            neighbours[i].push_back(p);
            neighbours[p].push_back(i);
        }
    }
    const std::set<VarIndex> z(zs.begin(), zs.end());
    auto has_descendant_in_z = [&](VarIndex e) {
        for (VarIndex d : s.descendants(e)) {
            if (z.count(d)) return true;
        }
        return false;
    };
    auto blocked = [&](const std::vector<VarIndex>& trail) {
        for (std::size_t t = 1; t + 1 < trail.size(); ++t) {
            const VarIndex e = trail[t];
            const bool head_to_head = s.has_arc(trail[t - 1], e) && s.has_arc(trail[t + 1], e);
            if (head_to_head && !z.count(e) && !has_descendant_in_z(e)) return true;
            if (!head_to_head && z.count(e)) return true;
        }
        return false;
    };
    bool all_blocked = true;
    std::vector<VarIndex> trail;
    std::vector<char> on_trail(n, 0);
    std::function<void(VarIndex, VarIndex)> walk = [&](VarIndex v, VarIndex target) {
        if (!all_blocked) return;
        if (v == target) {
            if (!blocked(trail)) all_blocked = false;
            return;
        }
        for (VarIndex w : neighbours[v]) {
            if (on_trail[w]) continue;
            on_trail[w] = 1;
            trail.push_back(w);
            walk(w, target);
            trail.pop_back();
            on_trail[w] = 0;
        }
    };
    for (VarIndex x : xs) {
        for (VarIndex y : ys) {
            trail = {x};
            std::fill(on_trail.begin(), on_trail.end(), 0);
            on_trail[x] = 1;
            walk(x, y);
        }
    }
    return all_blocked;
}

using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial(std::uint64_t n) {
    BigInt f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double log2_big(const BigInt& v) {
    const std::size_t bits = boost::multiprecision::msb(v);
    if (bits < 60) return std::log2(static_cast<double>(v));
    const std::size_t shift = bits - 60;
    const BigInt top = v >> shift;
    return std::log2(static_cast<double>(top)) + static_cast<double>(shift);
}

/// log2 of prod_j (r-1)! / (N_ij+r-1)! * prod_k N_ijk!, as an exact rational
/// numerator/denominator before the single final logarithm.
inline double bayes_node_score_exact(const bnlearn::CountTable& c) {
    BigInt num = 1;
    BigInt den = 1;
    for (std::size_t j = 0; j < c.configurations; ++j) {
        num *= factorial(c.arity - 1);
        den *= factorial(c.nij[j] + c.arity - 1);
        for (std::size_t k = 0; k < c.arity; ++k) num *= factorial(c(j, k));
    }
    return log2_big(num) - log2_big(den);
}

/// All DAGs over n nodes by enumerating every tuple of parent sets and
/// discarding cyclic ones. Returns the best score and every structure
/// attaining it within tolerance.
struct BruteForceBest {
    double score = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<bnlearn::ParentSet>> argmax;
};

inline BruteForceBest best_dag_by_enumeration(const bnlearn::Database& db, bnlearn::Measure m) {
    const std::size_t n = db.variable_count();
    const std::uint32_t per_node = 1u << n;
    BruteForceBest best;
    std::vector<std::uint32_t> choice(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            std::vector<bnlearn::ParentSet> ps(n);
            for (VarIndex v = 0; v < n; ++v) {
                for (VarIndex p = 0; p < n; ++p) {
                    if (choice[v] & (1u << p)) ps[v].push_back(p);
                }
            }
            try {
                bnlearn::topological_order(ps);
            } catch (const bnlearn::CycleError&) {
                return;
            }
            double total = 0.0;
            for (VarIndex v = 0; v < n; ++v) {
                total += bnlearn::node_score(bnlearn::count(db, v, ps[v]), m);
            }
            const double tol = 1e-9 * std::max(1.0, std::abs(total));
            if (total > best.score + tol) {
                best.score = total;
                best.argmax = {ps};
            } else if (std::abs(total - best.score) <= tol) {
                best.argmax.push_back(ps);
            }
            return;
        }
        for (std::uint32_t mask = 0; mask < per_node; ++mask) {
            if (mask & (1u << i)) continue;
            choice[i] = mask;
            rec(i + 1);
        }
    };
    rec(0);
    return best;
}

/// Exact joint distribution as a flat vector, last variable fastest.
inline std::vector<double> joint_table(const bnlearn::BayesNet& net) {
    std::vector<double> out;
    bnlearn::for_each_assignment(net.structure().arities(),
                                 [&](const bnlearn::Assignment& a) { out.push_back(bnlearn::joint_probability(net, a)); });
    return out;
}

/// max over (x, y, z) with P(z) > 0 of |P(xy|z) - P(x|z) P(y|z)|.
inline double ci_violation(const bnlearn::BayesNet& net, VarIndex x, const std::vector<VarIndex>& z, VarIndex y) {
    const auto& ar = net.structure().arities();
    std::size_t qz = 1;
    for (VarIndex v : z) qz *= ar[v];
    const std::size_t rx = ar[x];
    const std::size_t ry = ar[y];
    std::vector<double> pxyz(rx * ry * qz, 0.0), pxz(rx * qz, 0.0), pyz(ry * qz, 0.0), pz(qz, 0.0);
    bnlearn::for_each_assignment(ar, [&](const bnlearn::Assignment& a) {
        const double p = bnlearn::joint_probability(net, a);
        std::size_t jz = 0;
        for (VarIndex v : z) jz = jz * ar[v] + a[v];
        pxyz[(a[x] * ry + a[y]) * qz + jz] += p;
        pxz[a[x] * qz + jz] += p;
        pyz[a[y] * qz + jz] += p;
        pz[jz] += p;
    });
    double worst = 0.0;
    for (std::size_t jz = 0; jz < qz; ++jz) {
        if (pz[jz] <= 0.0) continue;
        for (std::size_t vx = 0; vx < rx; ++vx) {
            for (std::size_t vy = 0; vy < ry; ++vy) {
                const double lhs = pxyz[(vx * ry + vy) * qz + jz] / pz[jz];
                const double rhs = (pxz[vx * qz + jz] / pz[jz]) * (pyz[vy * qz + jz] / pz[jz]);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return worst;
}

/// Random binary BayesNet over an index-ordered DAG, CPT entries >= 0.01.
inline bnlearn::BayesNet random_positive_net(std::size_t n, std::size_t max_parents, bnlearn::Seed seed) {
    bnlearn::Rng rng(seed);
    std::vector<bnlearn::ParentSet> ps(n);
    for (VarIndex i = 1; i < n; ++i) {
        for (VarIndex p = 0; p < i; ++p) {
            if (ps[i].size() < max_parents && rng.uniform() < 0.5) ps[i].push_back(p);
        }
    }
    bnlearn::NetworkStructure s(bnlearn::make_variables(n, 2), ps);
    return bnlearn::random_cpts(s, bnlearn::derive_seed(seed, {7}));
}

}  // namespace oracle

#endif  // BNLEARN_TESTS_ORACLES_HPP
