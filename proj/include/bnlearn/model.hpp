#ifndef BNLEARN_MODEL_HPP
#define BNLEARN_MODEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bnlearn {

using VarIndex = std::size_t;

/// Sorted ascending, no duplicates.
using ParentSet = std::vector<VarIndex>;

/// One value index per variable, 0-based.
using Assignment = std::vector<std::size_t>;

/// Joint-space enumeration refuses more states than this.
inline constexpr std::uint64_t kMaxJointStates = std::uint64_t{1} << 22;

/// Parent-configuration tables refuse more rows than this.
inline constexpr std::uint64_t kMaxConfigurations = std::uint64_t{1} << 26;

struct Variable {
    std::string name;
    std::size_t arity = 2;

    bool operator==(const Variable&) const = default;
};

namespace detail {

inline bool valid_name(const std::string& name) {
    if (name.empty()) return false;
    return std::none_of(name.begin(), name.end(), [](char c) {
        return c == ',' || c == ':' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
    });
}

inline void validate_variables(std::span<const Variable> vars) {
    std::unordered_set<std::string> seen;
    for (const auto& v : vars) {
        if (!valid_name(v.name)) throw SchemaError("invalid variable name '" + v.name + "'");
        if (v.arity < 2) throw SchemaError("variable '" + v.name + "' has arity < 2");
        if (!seen.insert(v.name).second) throw SchemaError("duplicate variable name '" + v.name + "'");
    }
}

}  // namespace detail

/// Topological order of the graph given by per-node parent sets. Among all
/// valid orders the lexicographically smallest one is returned.
inline std::vector<VarIndex> topological_order(std::span<const ParentSet> parents) {
    const std::size_t n = parents.size();
    std::vector<std::size_t> in_degree(n, 0);
    std::vector<std::vector<VarIndex>> children(n);
    for (VarIndex i = 0; i < n; ++i) {
        for (VarIndex p : parents[i]) {
            if (p >= n) throw SchemaError("parent index out of range");
            children[p].push_back(i);
            ++in_degree[i];
        }
    }
    std::priority_queue<VarIndex, std::vector<VarIndex>, std::greater<>> ready;
    for (VarIndex i = 0; i < n; ++i) {
        if (in_degree[i] == 0) ready.push(i);
    }
    std::vector<VarIndex> order;
    order.reserve(n);
    while (!ready.empty()) {
        VarIndex v = ready.top();
        ready.pop();
        order.push_back(v);
        for (VarIndex c : children[v]) {
            if (--in_degree[c] == 0) ready.push(c);
        }
    }
    if (order.size() != n) throw CycleError("parent relation contains a directed cycle");
    return order;
}

/// Number of configurations of a parent set (1 for the empty set).
inline std::size_t configuration_count(std::span<const VarIndex> parents,
                                       std::span<const std::size_t> arities) {
    std::uint64_t q = 1;
    for (VarIndex p : parents) {
        q *= arities[p];
        if (q > kMaxConfigurations) throw SizeError("parent configuration space too large");
    }
    return static_cast<std::size_t>(q);
}

/// Index of the configuration of `parents` under `values`. Parents are taken
/// in the given (ascending) order and the last parent varies fastest.
inline std::size_t configuration_index(std::span<const VarIndex> parents,
                                       std::span<const std::size_t> arities,
                                       std::span<const std::size_t> values) {
    std::size_t j = 0;
    for (VarIndex p : parents) j = j * arities[p] + values[p];
    return j;
}

/// Inverse of configuration_index: writes the parent values of configuration j
/// into `values` (other entries untouched).
inline void decode_configuration(std::span<const VarIndex> parents,
                                 std::span<const std::size_t> arities, std::size_t j,
                                 std::span<std::size_t> values) {
    for (std::size_t t = parents.size(); t-- > 0;) {
        values[parents[t]] = j % arities[parents[t]];
        j /= arities[parents[t]];
    }
}

/// A directed acyclic graph over an ordered list of variables.
class NetworkStructure {
public:
    NetworkStructure() = default;

    explicit NetworkStructure(std::vector<Variable> variables)
        : NetworkStructure(variables, std::vector<ParentSet>(variables.size())) {}

    NetworkStructure(std::vector<Variable> variables, std::vector<ParentSet> parents)
        : variables_(std::move(variables)), parents_(std::move(parents)) {
        detail::validate_variables(variables_);
        if (parents_.size() != variables_.size()) {
            throw SchemaError("parent list count does not match variable count");
        }
        const std::size_t n = variables_.size();
        for (VarIndex i = 0; i < n; ++i) {
            auto& ps = parents_[i];
            std::sort(ps.begin(), ps.end());
            if (std::adjacent_find(ps.begin(), ps.end()) != ps.end()) {
                throw SchemaError("duplicate parent of '" + variables_[i].name + "'");
            }
            for (VarIndex p : ps) {
                if (p >= n) throw SchemaError("parent index out of range");
                if (p == i) throw SelfParentError("'" + variables_[i].name + "' is its own parent");
            }
        }
        topological_order(parents_);
        children_.assign(n, {});
        arities_.resize(n);
        for (VarIndex i = 0; i < n; ++i) {
            arities_[i] = variables_[i].arity;
            for (VarIndex p : parents_[i]) children_[p].push_back(i);
        }
    }

    std::size_t size() const noexcept { return variables_.size(); }
    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const Variable& variable(VarIndex i) const { return variables_.at(i); }
    const ParentSet& parents(VarIndex i) const { return parents_.at(i); }
    const std::vector<ParentSet>& parent_sets() const noexcept { return parents_; }
    const std::vector<VarIndex>& children(VarIndex i) const { return children_.at(i); }
    const std::vector<std::size_t>& arities() const noexcept { return arities_; }

    std::optional<VarIndex> index_of(const std::string& name) const {
        for (VarIndex i = 0; i < variables_.size(); ++i) {
            if (variables_[i].name == name) return i;
        }
        return std::nullopt;
    }

    bool has_arc(VarIndex from, VarIndex to) const {
        const auto& ps = parents_.at(to);
        return std::binary_search(ps.begin(), ps.end(), from);
    }

    std::size_t arc_count() const noexcept {
        std::size_t c = 0;
        for (const auto& ps : parents_) c += ps.size();
        return c;
    }

    std::size_t max_parent_count() const noexcept {
        std::size_t c = 0;
        for (const auto& ps : parents_) c = std::max(c, ps.size());
        return c;
    }

    /// q_i for variable i.
    std::size_t configurations(VarIndex i) const { return configuration_count(parents(i), arities_); }

    /// Strict descendants of i.
    std::vector<VarIndex> descendants(VarIndex i) const { return reach(i, children_); }

    /// Strict ancestors of i.
    std::vector<VarIndex> ancestors(VarIndex i) const { return reach(i, parents_); }

    bool operator==(const NetworkStructure& other) const {
        return variables_ == other.variables_ && parents_ == other.parents_;
    }

private:
    static std::vector<VarIndex> reach(VarIndex start, const std::vector<std::vector<VarIndex>>& next) {
        std::vector<char> seen(next.size(), 0);
        std::vector<VarIndex> stack{start};
        std::vector<VarIndex> out;
        while (!stack.empty()) {
            VarIndex v = stack.back();
            stack.pop_back();
            for (VarIndex w : next[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    out.push_back(w);
                    stack.push_back(w);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<Variable> variables_;
    std::vector<ParentSet> parents_;
    std::vector<std::vector<VarIndex>> children_;
    std::vector<std::size_t> arities_;
};

inline std::vector<VarIndex> topological_order(const NetworkStructure& structure) {
    return topological_order(structure.parent_sets());
}

/// Conditional probability table: one row per parent configuration.
class Cpt {
public:
    static constexpr double kRowTolerance = 1e-9;

    Cpt() = default;

    Cpt(std::size_t rows, std::size_t arity, std::vector<double> probs)
        : rows_(rows), arity_(arity), probs_(std::move(probs)) {
        if (probs_.size() != rows_ * arity_) throw SchemaError("CPT size mismatch");
        for (std::size_t j = 0; j < rows_; ++j) {
            double sum = 0.0;
            for (double p : row(j)) {
                if (!(p >= 0.0 && p <= 1.0)) throw SchemaError("CPT entry outside [0,1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowTolerance) throw SchemaError("CPT row does not sum to 1");
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t arity() const noexcept { return arity_; }
    std::span<const double> row(std::size_t j) const {
        return std::span<const double>(probs_).subspan(j * arity_, arity_);
    }
    double operator()(std::size_t j, std::size_t k) const { return probs_[j * arity_ + k]; }
    const std::vector<double>& values() const noexcept { return probs_; }

    bool operator==(const Cpt&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t arity_ = 0;
    std::vector<double> probs_;
};

class BayesNet {
public:
    BayesNet() = default;

    BayesNet(NetworkStructure structure, std::vector<Cpt> cpts)
        : structure_(std::move(structure)), cpts_(std::move(cpts)) {
        if (cpts_.size() != structure_.size()) throw SchemaError("one CPT per variable required");
        for (VarIndex i = 0; i < structure_.size(); ++i) {
            if (cpts_[i].rows() != structure_.configurations(i) ||
                cpts_[i].arity() != structure_.variable(i).arity) {
                throw SchemaError("CPT dimensions of '" + structure_.variable(i).name +
                                  "' do not match its parent set");
            }
        }
    }

    const NetworkStructure& structure() const noexcept { return structure_; }
    const Cpt& cpt(VarIndex i) const { return cpts_.at(i); }
    const std::vector<Cpt>& cpts() const noexcept { return cpts_; }
    std::size_t size() const noexcept { return structure_.size(); }

    bool operator==(const BayesNet&) const = default;

private:
    NetworkStructure structure_;
    std::vector<Cpt> cpts_;
};

/// j such that w_ij is the configuration of i's parents under `a`.
inline std::size_t parent_config_index(const NetworkStructure& structure, VarIndex i,
                                       std::span<const std::size_t> a) {
    return configuration_index(structure.parents(i), structure.arities(), a);
}

inline double joint_probability(const BayesNet& net, std::span<const std::size_t> a) {
    const auto& s = net.structure();
    double p = 1.0;
    for (VarIndex i = 0; i < s.size(); ++i) {
        p *= net.cpt(i)(parent_config_index(s, i, a), a[i]);
    }
    return p;
}

inline std::uint64_t joint_state_count(std::span<const std::size_t> arities) {
    std::uint64_t states = 1;
    for (std::size_t r : arities) {
        states *= r;
        if (states > kMaxJointStates) {
            throw SizeError("joint space exceeds " + std::to_string(kMaxJointStates) + " states");
        }
    }
    return states;
}

/// Calls fn(assignment) for every joint assignment, last variable fastest.
template <class Fn>
void for_each_assignment(std::span<const std::size_t> arities, Fn&& fn) {
    joint_state_count(arities);
    Assignment a(arities.size(), 0);
    while (true) {
        fn(std::as_const(a));
        std::size_t t = a.size();
        while (t > 0) {
            --t;
            if (++a[t] < arities[t]) break;
            a[t] = 0;
            if (t == 0) return;
        }
        if (a.empty()) return;
    }
}

/// True iff every trail between X and Y is blocked by Z.
inline bool d_separated(const NetworkStructure& structure, std::span<const VarIndex> x,
                        std::span<const VarIndex> z, std::span<const VarIndex> y) {
    const std::size_t n = structure.size();
    if (x.empty() || y.empty()) throw Error("d-separation needs nonempty X and Y");
    std::vector<unsigned char> role(n, 0);  // bit 1: X, 2: Z, 4: Y
    auto mark = [&](std::span<const VarIndex> set, unsigned char bit) {
        for (VarIndex v : set) {
            if (v >= n) throw SchemaError("variable index out of range");
            if (role[v] & ~bit) throw DisjointnessError("X, Z and Y must be pairwise disjoint");
            role[v] |= bit;
        }
    };
    mark(x, 1);
    mark(z, 2);
    mark(y, 4);

    // Z together with its ancestors: a head-to-head node passes iff it is here.
    std::vector<char> z_or_ancestor(n, 0);
    {
        std::vector<VarIndex> stack(z.begin(), z.end());
        while (!stack.empty()) {
            VarIndex v = stack.back();
            stack.pop_back();
            if (z_or_ancestor[v]) continue;
            z_or_ancestor[v] = 1;
            for (VarIndex p : structure.parents(v)) stack.push_back(p);
        }
    }

    // Reachability over (node, direction). Up: entered from a child. Down: from a parent.
    enum : int { kUp = 0, kDown = 1 };
    std::vector<std::array<char, 2>> visited(n, {0, 0});
    std::vector<std::pair<VarIndex, int>> stack;
    for (VarIndex v : x) stack.emplace_back(v, kUp);
    while (!stack.empty()) {
        auto [v, dir] = stack.back();
        stack.pop_back();
        if (visited[v][dir]) continue;
        visited[v][dir] = 1;
        const bool in_z = role[v] & 2;
        if (!in_z && (role[v] & 4)) return false;
        if (dir == kUp) {
            if (in_z) continue;
            for (VarIndex p : structure.parents(v)) stack.emplace_back(p, kUp);
            for (VarIndex c : structure.children(v)) stack.emplace_back(c, kDown);
        } else {
            if (!in_z) {
                for (VarIndex c : structure.children(v)) stack.emplace_back(c, kDown);
            }
            if (z_or_ancestor[v]) {
                for (VarIndex p : structure.parents(v)) stack.emplace_back(p, kUp);
            }
        }
    }
    return true;
}

inline bool d_separated(const NetworkStructure& structure, std::initializer_list<VarIndex> x,
                        std::initializer_list<VarIndex> z, std::initializer_list<VarIndex> y) {
    return d_separated(structure, std::span<const VarIndex>(x.begin(), x.size()),
                       std::span<const VarIndex>(z.begin(), z.size()),
                       std::span<const VarIndex>(y.begin(), y.size()));
}

}  // namespace bnlearn

#endif  // BNLEARN_MODEL_HPP
