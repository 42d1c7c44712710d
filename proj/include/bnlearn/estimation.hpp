#ifndef BNLEARN_ESTIMATION_HPP
#define BNLEARN_ESTIMATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "stats.hpp"

namespace bnlearn {

/// Expected-value estimate under a uniform Dirichlet prior: (N_ijk + 1) / (N_ij + r_i).
inline Cpt direct_estimate(const CountTable& c) {
    std::vector<double> probs(c.configurations * c.arity);
    for (std::size_t j = 0; j < c.configurations; ++j) {
        const double denom = static_cast<double>(c.nij[j] + c.arity);
        for (std::size_t k = 0; k < c.arity; ++k) {
            probs[j * c.arity + k] = static_cast<double>(c(j, k) + 1) / denom;
        }
    }
    return Cpt(c.configurations, c.arity, std::move(probs));
}

/// Candidate parent sets of one variable, each with its node score and counts.
struct WeightedParentSetFamily {
    struct Entry {
        ParentSet parents;
        double score = 0.0;
        CountTable counts;
    };

    std::vector<Entry> entries;

    void add(double score, CountTable counts) {
        ParentSet ps = counts.parent_set;
        entries.push_back({std::move(ps), score, std::move(counts)});
    }

    /// Union of all member parent sets, ascending.
    ParentSet union_parents() const {
        ParentSet u;
        for (const auto& e : entries) u.insert(u.end(), e.parents.begin(), e.parents.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return u;
    }
};

/// Score-weighted mixture of the direct estimates of every family member,
/// laid out over the configurations of the union parent set. A member's
/// estimate for configuration j contributes to every union configuration
/// that agrees with j on the member's parents. Weights are 2^score, shifted
/// by the maximum score before exponentiation.
inline Cpt weighted_estimate(const WeightedParentSetFamily& family) {
    if (family.entries.empty()) throw EmptyFamilyError("weighted estimate of an empty family");
    const auto& first = family.entries.front().counts;
    const std::size_t r = first.arity;

    // Arity of each union parent, gathered from the member tables.
    std::map<VarIndex, std::size_t> arity_of;
    double max_score = -std::numeric_limits<double>::infinity();
    for (const auto& e : family.entries) {
        if (e.counts.variable != first.variable || e.counts.arity != r) {
            throw SchemaError("family members describe different variables");
        }
        if (e.counts.parent_set != e.parents) throw SchemaError("family entry parents differ from its counts");
        if (!std::isfinite(e.score)) throw SchemaError("family entry has a non-finite score");
        for (std::size_t t = 0; t < e.parents.size(); ++t) {
            auto [it, inserted] = arity_of.emplace(e.parents[t], e.counts.parent_arities[t]);
            if (!inserted && it->second != e.counts.parent_arities[t]) {
                throw SchemaError("inconsistent parent arity within family");
            }
        }
        max_score = std::max(max_score, e.score);
    }

    const ParentSet uni = family.union_parents();
    std::vector<std::size_t> uni_arity;
    for (VarIndex p : uni) uni_arity.push_back(arity_of.at(p));
    std::size_t q = 1;
    for (std::size_t a : uni_arity) q *= a;

    // Positions of each member's parents inside the union list.
    std::vector<std::vector<std::size_t>> positions;
    std::vector<Cpt> estimates;
    std::vector<double> weights;
    double weight_sum = 0.0;
    for (const auto& e : family.entries) {
        std::vector<std::size_t> pos;
        for (VarIndex p : e.parents) {
            pos.push_back(static_cast<std::size_t>(std::lower_bound(uni.begin(), uni.end(), p) - uni.begin()));
        }
        positions.push_back(std::move(pos));
        estimates.push_back(direct_estimate(e.counts));
        weights.push_back(std::exp2(e.score - max_score));
        weight_sum += weights.back();
    }

    std::vector<double> probs(q * r, 0.0);
    std::vector<std::size_t> uni_values(uni.size());
    for (std::size_t jp = 0; jp < q; ++jp) {
        std::size_t rest = jp;
        for (std::size_t t = uni.size(); t-- > 0;) {
            uni_values[t] = rest % uni_arity[t];
            rest /= uni_arity[t];
        }
        double* row = &probs[jp * r];
        for (std::size_t m = 0; m < estimates.size(); ++m) {
            std::size_t j = 0;
            for (std::size_t t = 0; t < positions[m].size(); ++t) {
                j = j * uni_arity[positions[m][t]] + uni_values[positions[m][t]];
            }
            const double w = weights[m] / weight_sum;
            for (std::size_t k = 0; k < r; ++k) row[k] += w * estimates[m](j, k);
        }
        double s = 0.0;
        for (std::size_t k = 0; k < r; ++k) s += row[k];
        for (std::size_t k = 0; k < r; ++k) row[k] /= s;
    }
    return Cpt(q, r, std::move(probs));
}

/// Attaches direct estimates from `db` to every variable of `structure`.
inline BayesNet direct_network(const Database& db, const NetworkStructure& structure) {
    if (db.variables() != structure.variables()) {
        throw SchemaMismatchError("database and structure variables differ");
    }
    std::vector<Cpt> cpts;
    cpts.reserve(structure.size());
    for (VarIndex i = 0; i < structure.size(); ++i) {
        cpts.push_back(direct_estimate(count(db, i, structure.parents(i))));
    }
    return BayesNet(structure, std::move(cpts));
}

}  // namespace bnlearn

#endif  // BNLEARN_ESTIMATION_HPP
