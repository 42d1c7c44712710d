// bnlearn: command-line front end for structure learning, sampling and
// evaluation of discrete belief networks.
//
// Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 guard
// violation (input too large for an exact computation).

#include <bnlearn/bnlearn.hpp>
#include <bnlearn/config.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace bnlearn;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kGuard = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_score(Measure m, double score) {
    std::printf("score (%s, log2): %.6f\n", std::string(to_string(m)).c_str(), score);
}

void print_arcs(const NetworkStructure& s) {
    std::printf("arcs:");
    if (s.arc_count() == 0) std::printf(" none");
    for (VarIndex i = 0; i < s.size(); ++i) {
        for (VarIndex p : s.parents(i)) std::printf(" %s->%s", s.variable(p).name.c_str(), s.variable(i).name.c_str());
    }
    std::printf("\n");
}

Ordering parse_ordering(const std::string& text, const Database& db) {
    if (text == "file-order") return Ordering::identity(db.variable_count());
    std::map<std::string, VarIndex> index;
    for (VarIndex i = 0; i < db.variable_count(); ++i) index.emplace(db.variables()[i].name, i);
    std::vector<VarIndex> order;
    for (auto name : detail::split(text, ',')) {
        auto it = index.find(std::string(detail::trim(name)));
        if (it == index.end()) throw UsageError("--ordering names unknown variable '" + std::string(name) + "'");
        order.push_back(it->second);
    }
    try {
        return Ordering(std::move(order));
    } catch (const Error&) {
        throw UsageError("--ordering must list every variable exactly once");
    }
}

struct GenNet {
    std::size_t nodes = 0;
    std::size_t arity = 2;
    std::size_t max_parents = 3;
    Seed seed = 0;
    std::string out;

    void run() const {
        if (max_parents == 0) throw UsageError("--max-parents must be at least 1");
        auto s = random_structure(nodes, max_parents, derive_seed(seed, {1}), arity);
        write_network(out, random_cpts(s, derive_seed(seed, {2})));
    }
};

struct Sample {
    std::string net;
    std::size_t cases = 0;
    Seed seed = 0;
    std::string out;

    void run() const { write_database(out, forward_sample(read_network(net), cases, seed)); }
};

struct Learn {
    std::string data;
    std::string algo;
    std::string measure;
    std::string ordering;
    std::optional<std::size_t> max_parents;
    std::string out;

    void run() const {
        const Measure m = parse_measure(measure);
        const Database db = read_database(data);
        const bool needs_ordering = algo == "k2" || algo == "wk2";
        if (needs_ordering && ordering.empty()) {
            throw UsageError("--algo " + algo + " needs --ordering (variable names or 'file-order')");
        }
        SearchOptions opts;
        opts.max_parents = max_parents;

        SearchResult r;
        if (needs_ordering) {
            r = k2(db, parse_ordering(ordering, db), m, opts);
        } else if (algo == "b" || algo == "wb") {
            r = algorithm_b(db, m, opts);
        } else {
            r = exhaustive_best(db, m, opts);
        }
        const bool weighted = algo == "wk2" || algo == "wb";
        const BayesNet net = weighted ? weighted_network(db, m, r) : direct_network(db, r.structure);
        write_network(out, net);
        print_score(m, r.score);
        print_arcs(r.structure);
    }
};

struct Score {
    std::string data;
    std::string net;
    std::string measure;

    void run() const {
        const Measure m = parse_measure(measure);
        const BayesNet bn = read_network(net);
        print_score(m, network_score(read_database(data), bn.structure(), m));
    }
};

struct Eval {
    std::string gold;
    std::string learned;

    void run() const {
        const BayesNet g = read_network(gold);
        const BayesNet l = read_network(learned);
        const auto d = structural_diff(g.structure(), l.structure());
        std::printf("divergence (log2): %.6f\n", kl_divergence(g, l));
        std::printf("extra_arcs: %zu\nmissing_arcs: %zu\nextra_edges: %zu\nmissing_edges: %zu\n", d.extra_arcs,
                    d.missing_arcs, d.extra_edges, d.missing_edges);
    }
};

struct Adversarial {
    std::size_t j = 0;
    std::string out;

    void run() const {
        if (j == 0) throw UsageError("-j must be at least 1");
        write_database(out, adversarial_db(j));
    }
};

struct Experiment {
    std::string config;
    std::string out;
    std::optional<std::size_t> jobs;
    std::optional<Seed> seed;
    std::optional<std::size_t> networks;

    void run() const {
        ExperimentConfig cfg;
        if (!config.empty()) {
            auto in = detail::open_in(config);
            cfg = read_experiment_config(in);
        }
        if (jobs) cfg.jobs = *jobs;
        if (seed) cfg.base_seed = *seed;
        if (networks) cfg.networks = *networks;
        try {
            cfg.validate();
        } catch (const GuardError&) {
            throw;
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        const auto report = run_experiment(cfg);
        std::filesystem::create_directories(out);
        write_report(out, report);
        write_report_table(std::cout, report);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn, sample and evaluate discrete belief networks"};
    app.require_subcommand(1);

    GenNet gen;
    auto* c_gen = app.add_subcommand("gen-net", "Write a random connected network");
    c_gen->add_option("--nodes", gen.nodes, "Number of variables")->required()->check(CLI::PositiveNumber);
    c_gen->add_option("--arity", gen.arity, "Values per variable")->check(CLI::Range(2, 1 << 16));
    c_gen->add_option("--max-parents", gen.max_parents, "Parent-set size cap");
    c_gen->add_option("--seed", gen.seed, "Random seed")->required();
    c_gen->add_option("-o,--out", gen.out, "Output network file")->required();

    Sample sample;
    auto* c_sample = app.add_subcommand("sample", "Draw cases from a network");
    c_sample->add_option("--net", sample.net, "Network file")->required();
    c_sample->add_option("-n,--cases", sample.cases, "Number of cases")->required();
    c_sample->add_option("--seed", sample.seed, "Random seed")->required();
    c_sample->add_option("-o,--out", sample.out, "Output database file")->required();

    Learn learn;
    auto* c_learn = app.add_subcommand("learn", "Learn a network from a database");
    c_learn->add_option("--data", learn.data, "Database file")->required();
    c_learn->add_option("--algo", learn.algo, "Search algorithm")
        ->required()
        ->check(CLI::IsMember({"k2", "b", "wk2", "wb", "exhaustive"}));
    c_learn->add_option("--measure", learn.measure, "Quality measure")
        ->required()
        ->check(CLI::IsMember({"bayes", "mdl"}));
    c_learn->add_option("--ordering", learn.ordering, "Comma-separated names, or 'file-order'");
    c_learn->add_option("--max-parents", learn.max_parents, "Parent-set size cap");
    c_learn->add_option("-o,--out", learn.out, "Output network file")->required();

    Score score;
    auto* c_score = app.add_subcommand("score", "Score a network structure against a database");
    c_score->add_option("--data", score.data, "Database file")->required();
    c_score->add_option("--net", score.net, "Network file")->required();
    c_score->add_option("--measure", score.measure, "Quality measure")
        ->required()
        ->check(CLI::IsMember({"bayes", "mdl"}));

    Eval eval;
    auto* c_eval = app.add_subcommand("eval", "Compare a learned network with the true one");
    c_eval->add_option("--true", eval.gold, "True network file")->required();
    c_eval->add_option("--learned", eval.learned, "Learned network file")->required();

    Adversarial adv;
    auto* c_adv = app.add_subcommand("adversarial", "Write the adversarial database D_j");
    c_adv->add_option("-j", adv.j, "Level")->required();
    c_adv->add_option("-o,--out", adv.out, "Output database file")->required();

    Experiment exp;
    auto* c_exp = app.add_subcommand("experiment", "Run the divergence experiment grid");
    c_exp->add_option("--config", exp.config, "JSON grid description (defaults if omitted)");
    c_exp->add_option("-o,--out", exp.out, "Output directory")->required();
    c_exp->add_option("--jobs", exp.jobs, "Worker threads (0: all cores)");
    c_exp->add_option("--seed", exp.seed, "Override the base seed");
    c_exp->add_option("--networks", exp.networks, "Override the number of gold networks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (c_gen->parsed()) gen.run();
        if (c_sample->parsed()) sample.run();
        if (c_learn->parsed()) learn.run();
        if (c_score->parsed()) score.run();
        if (c_eval->parsed()) eval.run();
        if (c_adv->parsed()) adv.run();
        if (c_exp->parsed()) exp.run();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const GuardError& e) {
        std::cerr << "too large: " << e.what() << '\n';
        return kGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kOk;
}
