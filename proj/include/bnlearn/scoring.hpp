#ifndef BNLEARN_SCORING_HPP
#define BNLEARN_SCORING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "stats.hpp"

namespace bnlearn {

// All scores are base-2 logarithms.

enum class Measure { Bayesian, MDL };

inline std::string_view to_string(Measure m) { return m == Measure::Bayesian ? "bayes" : "mdl"; }

inline Measure parse_measure(std::string_view s) {
    if (s == "bayes" || s == "bayesian") return Measure::Bayesian;
    if (s == "mdl") return Measure::MDL;
    throw Error("unknown measure '" + std::string(s) + "'");
}

namespace detail {

// log(n!) in natural units. Table lookup for small n keeps this free of the
// lgamma/signgam race; Stirling's series beyond that.
inline double ln_factorial(std::uint64_t n) {
    static constexpr std::size_t kTable = 1 << 16;
    static const std::vector<double> table = [] {
        std::vector<double> t(kTable);
        for (std::size_t i = 0; i < kTable; ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    if (n < kTable) return table[n];
    const double x = static_cast<double>(n) + 1.0;
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
}

}  // namespace detail

/// Log of the Cooper-Herskovits factor of one variable:
/// sum_j [ log (r-1)! - log (N_ij + r - 1)! + sum_k log N_ijk! ].
inline double bayes_node_score(const CountTable& c) {
    const double ln_r_minus_1 = detail::ln_factorial(c.arity - 1);
    double total = 0.0;
    for (std::size_t j = 0; j < c.configurations; ++j) {
        if (c.nij[j] == 0) continue;  // (r-1)!/(r-1)! = 1
        double row = ln_r_minus_1 - detail::ln_factorial(c.nij[j] + c.arity - 1);
        for (std::size_t k = 0; k < c.arity; ++k) row += detail::ln_factorial(c(j, k));
        total += row;
    }
    return total / std::numbers::ln2;
}

/// Conditional log-likelihood minus half the parameter count times log N.
inline double mdl_node_score(const CountTable& c) {
    if (c.n_total == 0) throw ZeroCasesError("MDL measure needs at least one case");
    double loglik = 0.0;
    for (std::size_t j = 0; j < c.configurations; ++j) {
        if (c.nij[j] == 0) continue;
        const double nij = static_cast<double>(c.nij[j]);
        for (std::size_t k = 0; k < c.arity; ++k) {
            const std::uint64_t n = c(j, k);
            if (n == 0) continue;
            loglik += static_cast<double>(n) * std::log2(static_cast<double>(n) / nij);
        }
    }
    const double penalty = 0.5 * static_cast<double>(c.configurations) *
                           static_cast<double>(c.arity - 1) *
                           std::log2(static_cast<double>(c.n_total));
    return loglik - penalty;
}

inline double node_score(const CountTable& c, Measure m) {
    return m == Measure::Bayesian ? bayes_node_score(c) : mdl_node_score(c);
}

/// Number of independent probabilities: sum_i (r_i - 1) q_i.
inline std::uint64_t parameter_count(const NetworkStructure& structure) {
    std::uint64_t k = 0;
    for (VarIndex i = 0; i < structure.size(); ++i) {
        k += (structure.variable(i).arity - 1) * structure.configurations(i);
    }
    return k;
}

inline void require_same_schema(const std::vector<Variable>& a, const std::vector<Variable>& b) {
    if (a != b) throw SchemaMismatchError("variable lists differ (names, order or arities)");
}

/// Decomposable network score; the structure prior is uniform and dropped.
inline double network_score(const Database& db, const NetworkStructure& structure, Measure m) {
    require_same_schema(db.variables(), structure.variables());
    double total = 0.0;
    for (VarIndex i = 0; i < structure.size(); ++i) {
        total += node_score(count(db, i, structure.parents(i)), m);
    }
    return total;
}

/// Memoizing m_i(pi_i) evaluator bound to one database and measure. Counts
/// how many distinct node scores it actually computed.
class NodeScorer {
public:
    NodeScorer(const Database& db, Measure m) : db_(&db), measure_(m) {}

    double operator()(VarIndex i, std::span<const VarIndex> parents) {
        ParentSet key(parents.begin(), parents.end());
        std::sort(key.begin(), key.end());
        auto [it, inserted] = cache_.try_emplace({i, std::move(key)}, 0.0);
        if (inserted) {
            it->second = node_score(count(*db_, i, it->first.second), measure_);
            ++evaluations_;
        }
        return it->second;
    }

    double operator()(VarIndex i, std::initializer_list<VarIndex> parents) {
        return (*this)(i, std::span<const VarIndex>(parents.begin(), parents.size()));
    }

    std::size_t evaluations() const noexcept { return evaluations_; }
    const Database& database() const noexcept { return *db_; }
    Measure measure() const noexcept { return measure_; }

private:
    const Database* db_;
    Measure measure_;
    std::map<std::pair<VarIndex, ParentSet>, double> cache_;
    std::size_t evaluations_ = 0;
};

}  // namespace bnlearn

#endif  // BNLEARN_SCORING_HPP
