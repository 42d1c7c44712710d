#ifndef BNLEARN_EVALUATION_HPP
#define BNLEARN_EVALUATION_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "datagen.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "io.hpp"
#include "model.hpp"
#include "random.hpp"
#include "scoring.hpp"
#include "search.hpp"

namespace bnlearn {

/// Kullback-Leibler divergence sum_u P(u) log2(P(u) / Q(u)) of the learned
/// joint Q from the gold joint P, by full enumeration.
inline double kl_divergence(const BayesNet& gold, const BayesNet& learned) {
    require_same_schema(gold.structure().variables(), learned.structure().variables());
    double total = 0.0;
    for_each_assignment(gold.structure().arities(), [&](const Assignment& a) {
        const double p = joint_probability(gold, a);
        if (p <= 0.0) return;
        const double q = joint_probability(learned, a);
        if (q <= 0.0) throw SupportError("learned network assigns zero probability to a supported state");
        total += p * std::log2(p / q);
    });
    return total;
}

struct StructuralDiff {
    std::size_t extra_arcs = 0;
    std::size_t missing_arcs = 0;
    std::size_t extra_edges = 0;
    std::size_t missing_edges = 0;

    bool operator==(const StructuralDiff&) const = default;
};

/// Arc errors compare directed arc sets; edge errors compare skeletons.
inline StructuralDiff structural_diff(const NetworkStructure& gold, const NetworkStructure& learned) {
    require_same_schema(gold.variables(), learned.variables());
    auto arcs = [](const NetworkStructure& s) {
        std::set<std::pair<VarIndex, VarIndex>> out;
        for (VarIndex i = 0; i < s.size(); ++i) {
            for (VarIndex p : s.parents(i)) out.emplace(p, i);
        }
        return out;
    };
    auto edges = [](const std::set<std::pair<VarIndex, VarIndex>>& a) {
        std::set<std::pair<VarIndex, VarIndex>> out;
        for (auto [p, c] : a) out.emplace(std::min(p, c), std::max(p, c));
        return out;
    };
    auto missing_from = [](const auto& have, const auto& want) {
        std::size_t n = 0;
        for (const auto& x : want) n += have.count(x) == 0;
        return n;
    };
    const auto ga = arcs(gold);
    const auto la = arcs(learned);
    const auto ge = edges(ga);
    const auto le = edges(la);
    return {missing_from(ga, la), missing_from(la, ga), missing_from(ge, le), missing_from(le, ge)};
}

enum class SearchAlgorithm { K2, B };
enum class Estimator { Direct, Weighted };

inline std::string_view to_string(SearchAlgorithm a) { return a == SearchAlgorithm::K2 ? "K2" : "B"; }
inline std::string_view to_string(Estimator e) { return e == Estimator::Direct ? "direct" : "weighted"; }

inline SearchAlgorithm parse_search_algorithm(std::string_view s) {
    if (s == "K2" || s == "k2") return SearchAlgorithm::K2;
    if (s == "B" || s == "b") return SearchAlgorithm::B;
    throw Error("unknown search algorithm '" + std::string(s) + "'");
}

inline Estimator parse_estimator(std::string_view s) {
    if (s == "direct") return Estimator::Direct;
    if (s == "weighted") return Estimator::Weighted;
    throw Error("unknown estimator '" + std::string(s) + "'");
}

struct ExperimentConfig {
    std::size_t networks = 10;
    std::size_t variables = 10;
    std::size_t arity = 2;
    std::size_t max_parents = 3;
    std::vector<std::size_t> sample_sizes{100, 200, 300, 400, 500};
    std::vector<SearchAlgorithm> algorithms{SearchAlgorithm::K2, SearchAlgorithm::B};
    std::vector<Measure> measures{Measure::Bayesian, Measure::MDL};
    std::vector<Estimator> estimators{Estimator::Direct, Estimator::Weighted};
    Seed base_seed = 42;
    std::size_t jobs = 0;  // 0: hardware concurrency; never affects results

    void validate() const {
        if (networks == 0 || variables == 0) throw Error("experiment needs at least one network and variable");
        if (arity < 2) throw Error("experiment arity must be >= 2");
        if (max_parents == 0) throw Error("experiment max_parents must be >= 1");
        if (sample_sizes.empty() || algorithms.empty() || measures.empty() || estimators.empty()) {
            throw Error("experiment grid has an empty axis");
        }
        for (std::size_t n : sample_sizes) {
            if (n == 0) throw Error("experiment sample sizes must be positive");
        }
        std::vector<std::size_t> arities(variables, arity);
        joint_state_count(arities);
    }
};

struct ReportRow {
    std::size_t sample_size = 0;
    Measure measure = Measure::Bayesian;
    SearchAlgorithm algorithm = SearchAlgorithm::K2;
    Estimator estimator = Estimator::Direct;
    double mean = 0.0;
    double variance = 0.0;         // population variance over the gold networks
    std::vector<double> raw;       // one divergence per gold network
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;

    const ReportRow& row(std::size_t n, Measure m, SearchAlgorithm a, Estimator e) const {
        for (const auto& r : rows) {
            if (r.sample_size == n && r.measure == m && r.algorithm == a && r.estimator == e) return r;
        }
        throw Error("no such report row");
    }
};

inline std::pair<double, double> mean_and_variance(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, var};
}

/// Seed-derivation coordinates.
namespace seed_tag {
inline constexpr std::uint64_t kStructure = 1;
inline constexpr std::uint64_t kTables = 2;
inline constexpr std::uint64_t kSample = 3;
}  // namespace seed_tag

/// A gold network and the variable ordering it was constructed under; K2
/// receives that ordering.
struct GoldNetwork {
    BayesNet net;
    Ordering ordering;
};

inline GoldNetwork experiment_gold(const ExperimentConfig& cfg, std::size_t net_index) {
    auto generated = generate_structure(make_variables(cfg.variables, cfg.arity), cfg.max_parents,
                                        derive_seed(cfg.base_seed, {seed_tag::kStructure, net_index}));
    return {random_cpts(generated.structure, derive_seed(cfg.base_seed, {seed_tag::kTables, net_index})),
            Ordering(std::move(generated.ordering))};
}

inline BayesNet experiment_gold_network(const ExperimentConfig& cfg, std::size_t net_index) {
    return experiment_gold(cfg, net_index).net;
}

/// Shared database for (gold network, N). Coordinates follow
/// (net_index, N, algorithm_id, measure_id); the zero ids mark the database
/// that every cell of that (network, N) pair consumes.
inline Database experiment_database(const ExperimentConfig& cfg, const BayesNet& gold, std::size_t net_index,
                                    std::size_t sample_size) {
    return forward_sample(gold, sample_size,
                          derive_seed(cfg.base_seed, {seed_tag::kSample, net_index, sample_size, 0, 0}));
}

/// Runs every (N, measure, algorithm, estimator) cell on every gold network.
/// Rows come out N-major, then measure, estimator and algorithm in config order.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report{cfg, {}};
    for (std::size_t n : cfg.sample_sizes) {
        for (Measure m : cfg.measures) {
            for (Estimator e : cfg.estimators) {
                for (SearchAlgorithm a : cfg.algorithms) {
                    report.rows.push_back({n, m, a, e, 0.0, 0.0, std::vector<double>(cfg.networks, 0.0)});
                }
            }
        }
    }
    auto row_index = [&](std::size_t n_idx, std::size_t m_idx, std::size_t e_idx, std::size_t a_idx) {
        return ((n_idx * cfg.measures.size() + m_idx) * cfg.estimators.size() + e_idx) * cfg.algorithms.size() +
               a_idx;
    };

    std::vector<GoldNetwork> golds;
    for (std::size_t g = 0; g < cfg.networks; ++g) golds.push_back(experiment_gold(cfg, g));

    const std::size_t tasks = cfg.networks * cfg.sample_sizes.size();
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::string failure_where;

    auto worker = [&] {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            const std::size_t g = t / cfg.sample_sizes.size();
            const std::size_t n_idx = t % cfg.sample_sizes.size();
            const std::size_t n = cfg.sample_sizes[n_idx];
            std::string where = "net " + std::to_string(g) + ", N=" + std::to_string(n);
            try {
                const BayesNet& gold = golds[g].net;
                const Ordering& ordering = golds[g].ordering;
                const Database db = experiment_database(cfg, gold, g, n);
                for (std::size_t m_idx = 0; m_idx < cfg.measures.size(); ++m_idx) {
                    const Measure m = cfg.measures[m_idx];
                    for (std::size_t a_idx = 0; a_idx < cfg.algorithms.size(); ++a_idx) {
                        const SearchAlgorithm a = cfg.algorithms[a_idx];
                        where = "net " + std::to_string(g) + ", N=" + std::to_string(n) + ", " +
                                std::string(to_string(m)) + "/" + std::string(to_string(a));
                        const SearchResult found =
                            a == SearchAlgorithm::K2 ? k2(db, ordering, m) : algorithm_b(db, m);
                        for (std::size_t e_idx = 0; e_idx < cfg.estimators.size(); ++e_idx) {
                            const Estimator e = cfg.estimators[e_idx];
                            const BayesNet learned = e == Estimator::Direct ? direct_network(db, found.structure)
                                                                            : weighted_network(db, m, found);
                            report.rows[row_index(n_idx, m_idx, e_idx, a_idx)].raw[g] = kl_divergence(gold, learned);
                        }
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                    failure_where = where;
                }
                next.store(tasks);
                return;
            }
        }
    };

    std::size_t jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, tasks);
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& ex) {
            throw Error("experiment cell failed (" + failure_where + "): " + ex.what());
        }
    }
    for (auto& r : report.rows) std::tie(r.mean, r.variance) = mean_and_variance(r.raw);
    return report;
}

inline void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "N,measure,algorithm,estimator,mean_divergence,var_divergence\n";
    for (const auto& r : report.rows) {
        out << r.sample_size << ',' << to_string(r.measure) << ',' << to_string(r.algorithm) << ','
            << to_string(r.estimator) << ',' << detail::format_double(r.mean) << ','
            << detail::format_double(r.variance) << '\n';
    }
}

inline void write_raw_csv(std::ostream& out, const ExperimentReport& report) {
    out << "net_index,N,measure,algorithm,estimator,divergence\n";
    for (std::size_t g = 0; g < report.config.networks; ++g) {
        for (const auto& r : report.rows) {
            out << g << ',' << r.sample_size << ',' << to_string(r.measure) << ',' << to_string(r.algorithm)
                << ',' << to_string(r.estimator) << ',' << detail::format_double(r.raw[g]) << '\n';
        }
    }
}

/// Human-readable grid: one line per N with the cells in report order and
/// their mean, plus a final line of column means. Printed for mean and variance.
inline void write_report_table(std::ostream& out, const ExperimentReport& report) {
    const auto& cfg = report.config;
    const std::size_t cells = cfg.measures.size() * cfg.estimators.size() * cfg.algorithms.size();
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%8.3f", v);
        return std::string(buf);
    };
    for (int which = 0; which < 2; ++which) {
        out << (which == 0 ? "Average divergence\n" : "Variance of divergence\n");
        out << "     N";
        for (std::size_t c = 0; c < cells; ++c) {
            const auto& r = report.rows[c];
            std::string label = std::string(to_string(r.measure)) + "/" + std::string(to_string(r.estimator)).substr(0, 3) +
                                "/" + std::string(to_string(r.algorithm));
            char buf[32];
            std::snprintf(buf, sizeof buf, "%16s", label.c_str());
            out << buf;
        }
        out << "            aver.\n";
        std::vector<double> col(cells, 0.0);
        for (std::size_t n_idx = 0; n_idx < cfg.sample_sizes.size(); ++n_idx) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%6zu", cfg.sample_sizes[n_idx]);
            out << buf;
            double row_sum = 0.0;
            for (std::size_t c = 0; c < cells; ++c) {
                const auto& r = report.rows[n_idx * cells + c];
                const double v = which == 0 ? r.mean : r.variance;
                row_sum += v;
                col[c] += v;
                out << "        " << fmt(v);
            }
            out << "         " << fmt(row_sum / static_cast<double>(cells)) << '\n';
        }
        out << " aver.";
        for (std::size_t c = 0; c < cells; ++c) {
            out << "        " << fmt(col[c] / static_cast<double>(cfg.sample_sizes.size()));
        }
        out << '\n';
    }
}

/// Writes report.csv, raw.csv and table.txt into `dir` (created if needed).
inline void write_report(const std::filesystem::path& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir);
    {
        auto out = detail::open_out((dir / "report.csv").string());
        write_report_csv(out, report);
    }
    {
        auto out = detail::open_out((dir / "raw.csv").string());
        write_raw_csv(out, report);
    }
    {
        auto out = detail::open_out((dir / "table.txt").string());
        write_report_table(out, report);
    }
}

}  // namespace bnlearn

#endif  // BNLEARN_EVALUATION_HPP
