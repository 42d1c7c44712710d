#ifndef BNLEARN_CONFIG_HPP
#define BNLEARN_CONFIG_HPP

#include <algorithm>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "evaluation.hpp"

namespace bnlearn {

/// Reads an experiment grid from JSON. Absent keys keep their defaults.
///
///   {"networks": 10, "variables": 10, "arity": 2, "max_parents": 3,
///    "sample_sizes": [100, 500], "algorithms": ["K2", "B"],
///    "measures": ["bayes", "mdl"], "estimators": ["direct", "weighted"],
///    "base_seed": 42, "jobs": 4}
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    static const char* const kKeys[] = {"networks",   "variables",  "arity",      "max_parents", "sample_sizes",
                                        "algorithms", "measures",   "estimators", "base_seed",   "jobs"};
    if (!j.is_object()) throw Error("experiment config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
            throw Error("unknown experiment config key '" + key + "'");
        }
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("networks")) cfg.networks = j.at("networks").get<std::size_t>();
        if (j.contains("variables")) cfg.variables = j.at("variables").get<std::size_t>();
        if (j.contains("arity")) cfg.arity = j.at("arity").get<std::size_t>();
        if (j.contains("max_parents")) cfg.max_parents = j.at("max_parents").get<std::size_t>();
        if (j.contains("sample_sizes")) cfg.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
        if (j.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& s : j.at("algorithms")) cfg.algorithms.push_back(parse_search_algorithm(s.get<std::string>()));
        }
        if (j.contains("measures")) {
            cfg.measures.clear();
            for (const auto& s : j.at("measures")) cfg.measures.push_back(parse_measure(s.get<std::string>()));
        }
        if (j.contains("estimators")) {
            cfg.estimators.clear();
            for (const auto& s : j.at("estimators")) cfg.estimators.push_back(parse_estimator(s.get<std::string>()));
        }
        if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<Seed>();
        if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad experiment config: ") + e.what());
    }
    return cfg;
}

inline ExperimentConfig read_experiment_config(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("experiment config: ") + e.what());
    }
    return experiment_config_from_json(j);
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["networks"] = cfg.networks;
    j["variables"] = cfg.variables;
    j["arity"] = cfg.arity;
    j["max_parents"] = cfg.max_parents;
    j["sample_sizes"] = cfg.sample_sizes;
    for (auto a : cfg.algorithms) j["algorithms"].push_back(std::string(to_string(a)));
    for (auto m : cfg.measures) j["measures"].push_back(std::string(to_string(m)));
    for (auto e : cfg.estimators) j["estimators"].push_back(std::string(to_string(e)));
    j["base_seed"] = cfg.base_seed;
    j["jobs"] = cfg.jobs;
    return j;
}

}  // namespace bnlearn

#endif  // BNLEARN_CONFIG_HPP
