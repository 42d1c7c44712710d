#ifndef BNLEARN_STATS_HPP
#define BNLEARN_STATS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace bnlearn {

/// N complete cases over a fixed list of discrete variables, stored row-major.
class Database {
public:
    Database() = default;

    explicit Database(std::vector<Variable> variables) : variables_(std::move(variables)) {
        detail::validate_variables(variables_);
        for (const auto& v : variables_) arities_.push_back(v.arity);
    }

    Database(std::vector<Variable> variables, const std::vector<Assignment>& cases)
        : Database(std::move(variables)) {
        values_.reserve(cases.size() * arities_.size());
        for (const auto& c : cases) add_case(c);
    }

    void add_case(std::span<const std::size_t> values) {
        if (values.size() != arities_.size()) throw SchemaError("case has wrong number of values");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] >= arities_[i]) {
                throw SchemaError("value " + std::to_string(values[i]) + " out of range for '" +
                                  variables_[i].name + "'");
            }
        }
        values_.insert(values_.end(), values.begin(), values.end());
    }

    void reserve(std::size_t cases) { values_.reserve(cases * arities_.size()); }

    std::size_t case_count() const noexcept {
        return arities_.empty() ? 0 : values_.size() / arities_.size();
    }
    std::size_t variable_count() const noexcept { return variables_.size(); }
    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<std::size_t>& arities() const noexcept { return arities_; }

    std::span<const std::size_t> row(std::size_t c) const {
        return std::span<const std::size_t>(values_).subspan(c * arities_.size(), arities_.size());
    }
    std::size_t value(std::size_t c, VarIndex i) const { return values_[c * arities_.size() + i]; }

    bool operator==(const Database&) const = default;

private:
    std::vector<Variable> variables_;
    std::vector<std::size_t> arities_;
    std::vector<std::size_t> values_;
};

/// Sufficient statistics N_ijk / N_ij of one variable against one parent set.
struct CountTable {
    VarIndex variable = 0;
    ParentSet parent_set;
    std::vector<std::size_t> parent_arities;  // aligned with parent_set
    std::size_t arity = 0;                    // r_i
    std::size_t configurations = 1;           // q_i
    std::vector<std::uint64_t> nijk;          // q_i x r_i, row-major
    std::vector<std::uint64_t> nij;           // q_i
    std::uint64_t n_total = 0;

    std::uint64_t operator()(std::size_t j, std::size_t k) const { return nijk[j * arity + k]; }
};

/// Tallies the cases of `db` by (configuration of parent_set, value of variable i).
inline CountTable count(const Database& db, VarIndex i, std::span<const VarIndex> parent_set) {
    const std::size_t n = db.variable_count();
    if (i >= n) throw SchemaError("variable index out of range");
    CountTable t;
    t.variable = i;
    t.parent_set.assign(parent_set.begin(), parent_set.end());
    std::sort(t.parent_set.begin(), t.parent_set.end());
    for (VarIndex p : t.parent_set) {
        if (p >= n) throw SchemaError("parent index out of range");
        if (p == i) throw SelfParentError("variable listed in its own parent set");
        t.parent_arities.push_back(db.arities()[p]);
    }
    t.arity = db.arities()[i];
    t.configurations = configuration_count(t.parent_set, db.arities());
    t.nijk.assign(t.configurations * t.arity, 0);
    t.nij.assign(t.configurations, 0);
    t.n_total = db.case_count();
    for (std::size_t c = 0; c < db.case_count(); ++c) {
        auto row = db.row(c);
        std::size_t j = configuration_index(t.parent_set, db.arities(), row);
        ++t.nijk[j * t.arity + row[i]];
        ++t.nij[j];
    }
    return t;
}

inline CountTable count(const Database& db, VarIndex i, std::initializer_list<VarIndex> parent_set) {
    return count(db, i, std::span<const VarIndex>(parent_set.begin(), parent_set.size()));
}

}  // namespace bnlearn

#endif  // BNLEARN_STATS_HPP
