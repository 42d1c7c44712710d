#ifndef BNLEARN_DATAGEN_HPP
#define BNLEARN_DATAGEN_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace bnlearn {

/// Variables named x0, x1, ... all of the given arity.
inline std::vector<Variable> make_variables(std::size_t n, std::size_t arity, const std::string& prefix = "x") {
    std::vector<Variable> vars;
    vars.reserve(n);
    for (std::size_t i = 0; i < n; ++i) vars.push_back({prefix + std::to_string(i), arity});
    return vars;
}

/// A generated structure together with the ordering it was built from.
struct GeneratedStructure {
    NetworkStructure structure;
    std::vector<VarIndex> ordering;
};

/// Random weakly connected DAG. A uniform random ordering is drawn; every
/// predecessor becomes a parent with probability min(1, 2/(n-1)) while the
/// cap allows; remaining components are then joined by ordering-respecting
/// arcs chosen uniformly among the admissible ones.
inline GeneratedStructure generate_structure(std::vector<Variable> variables, std::size_t max_parents, Seed seed) {
    const std::size_t n = variables.size();
    if (n == 0) throw Error("random_structure needs at least one variable");
    if (max_parents == 0) throw Error("random_structure needs max_parents >= 1");
    Rng rng(seed);
    std::vector<VarIndex> order(n);
    std::iota(order.begin(), order.end(), VarIndex{0});
    rng.shuffle(order);
    std::vector<std::size_t> pos(n);
    for (std::size_t p = 0; p < n; ++p) pos[order[p]] = p;

    std::vector<ParentSet> parents(n);
    const double p_arc = n > 1 ? std::min(1.0, 2.0 / static_cast<double>(n - 1)) : 0.0;
    for (std::size_t p = 1; p < n; ++p) {
        const VarIndex v = order[p];
        for (std::size_t q = 0; q < p; ++q) {
            const bool draw = rng.uniform() < p_arc;
            if (draw && parents[v].size() < max_parents) parents[v].push_back(order[q]);
        }
    }

    std::vector<VarIndex> root(n);
    std::iota(root.begin(), root.end(), VarIndex{0});
    auto find = [&](VarIndex v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    for (VarIndex v = 0; v < n; ++v) {
        for (VarIndex p : parents[v]) root[find(p)] = find(v);
    }
    while (true) {
        const VarIndex anchor = find(order[0]);
        std::vector<std::pair<VarIndex, VarIndex>> candidates;  // (from, to)
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const VarIndex from = order[a];
                const VarIndex to = order[b];
                if ((find(from) == anchor) == (find(to) == anchor)) continue;
                if (parents[to].size() >= max_parents) continue;
                candidates.emplace_back(from, to);
            }
        }
        if (candidates.empty()) break;
        auto [from, to] = candidates[rng.below(candidates.size())];
        parents[to].push_back(from);
        root[find(from)] = find(to);
    }
    return {NetworkStructure(std::move(variables), std::move(parents)), std::move(order)};
}

inline NetworkStructure random_structure(std::vector<Variable> variables, std::size_t max_parents, Seed seed) {
    return generate_structure(std::move(variables), max_parents, seed).structure;
}

inline NetworkStructure random_structure(std::size_t n, std::size_t max_parents, Seed seed,
                                         std::size_t arity = 2) {
    return random_structure(make_variables(n, arity), max_parents, seed);
}

/// Smallest probability random_cpts will emit for arity r.
inline double cpt_floor(std::size_t arity) { return std::min(0.01, 0.5 / static_cast<double>(arity)); }

/// Random CPT rows: normalized uniform draws, then entries below the floor
/// are clamped to it and the rest rescaled, until no entry is below it.
inline BayesNet random_cpts(const NetworkStructure& structure, Seed seed) {
    Rng rng(seed);
    std::vector<Cpt> cpts;
    cpts.reserve(structure.size());
    for (VarIndex i = 0; i < structure.size(); ++i) {
        const std::size_t r = structure.variable(i).arity;
        const std::size_t q = structure.configurations(i);
        const double floor = cpt_floor(r);
        std::vector<double> probs(q * r);
        for (std::size_t j = 0; j < q; ++j) {
            double* row = &probs[j * r];
            double sum = 0.0;
            for (std::size_t k = 0; k < r; ++k) sum += row[k] = rng.uniform();
            for (std::size_t k = 0; k < r; ++k) row[k] /= sum;
            std::vector<char> clamped(r, 0);
            while (true) {
                std::size_t n_clamped = 0;
                double free_sum = 0.0;
                for (std::size_t k = 0; k < r; ++k) {
                    if (clamped[k]) ++n_clamped;
                    else free_sum += row[k];
                }
                const double free_mass = 1.0 - floor * static_cast<double>(n_clamped);
                bool changed = false;
                for (std::size_t k = 0; k < r; ++k) {
                    if (clamped[k]) {
                        row[k] = floor;
                        continue;
                    }
                    row[k] *= free_mass / free_sum;
                    if (row[k] < floor) {
                        clamped[k] = 1;
                        changed = true;
                    }
                }
                if (!changed) break;
            }
        }
        cpts.emplace_back(q, r, std::move(probs));
    }
    return BayesNet(structure, std::move(cpts));
}

/// Ancestral sampling of n_cases independent cases.
inline Database forward_sample(const BayesNet& net, std::size_t n_cases, Seed seed) {
    const auto& s = net.structure();
    Database db(s.variables());
    db.reserve(n_cases);
    Rng rng(seed);
    const auto order = topological_order(s);
    Assignment a(s.size(), 0);
    for (std::size_t c = 0; c < n_cases; ++c) {
        for (VarIndex v : order) {
            auto row = net.cpt(v).row(parent_config_index(s, v, a));
            const double u = rng.uniform();
            double cum = 0.0;
            std::size_t chosen = row.size();
            std::size_t last_positive = 0;
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (row[k] > 0.0) last_positive = k;
                cum += row[k];
                if (u < cum) {
                    chosen = k;
                    break;
                }
            }
            a[v] = chosen < row.size() ? chosen : last_positive;
        }
        db.add_case(a);
    }
    return db;
}

/// The database D_j over (x1, ..., xj, y): level n contributes two cases
/// with x1..xn = 0, later x's = 1 and y = (n+1) mod 2, except that level 1
/// is {(x1=0, y=0), (x1=1, y=1)}. Newest level first.
inline Database adversarial_db(std::size_t j) {
    if (j < 1) throw Error("adversarial database level must be >= 1");
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= j; ++i) vars.push_back({"x" + std::to_string(i), 2});
    vars.push_back({"y", 2});
    Database db(std::move(vars));
    db.reserve(2 * j);
    for (std::size_t level = j; level >= 1; --level) {
        Assignment a(j + 1, 1);
        for (std::size_t i = 0; i < level; ++i) a[i] = 0;
        a[j] = (level + 1) % 2;
        db.add_case(a);
        if (level == 1) {
            Assignment ones(j + 1, 1);
            db.add_case(ones);
        } else {
            db.add_case(a);
        }
    }
    return db;
}

}  // namespace bnlearn

#endif  // BNLEARN_DATAGEN_HPP
