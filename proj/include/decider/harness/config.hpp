#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <string>

#include "decider/core/errors.hpp"
#include "decider/core/json.hpp"
#include "decider/core/utility.hpp"
#include "decider/trace/trace.hpp"

namespace decider::harness {

// A decision-point demo (e.g. model routing) expressed entirely as
// configuration: candidate actions with payload numbers plus named
// reward/cost evaluators.
struct DecisionDemo {
    std::string name;
    std::vector<Action> actions;
    UtilitySpec spec;
};

inline DecisionDemo load_decision_demo(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("demo config not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("malformed demo config " + path + ": " + e.what());
    }
    DecisionDemo demo;
    demo.name = j.value("name", std::string("demo"));
    for (const auto& aj : j.at("actions")) demo.actions.push_back(action_from_json(aj));
    const auto& uj = j.at("utility");
    demo.spec.reward = uj.at("reward").get<std::string>();
    if (uj.contains("costs")) {
        for (const auto& cj : uj.at("costs")) {
            demo.spec.costs.push_back(
                {cj.at("evaluator").get<std::string>(), cj.at("weight").get<double>()});
        }
    }
    demo.spec.feasibility = uj.value("feasibility", std::string("all"));
    demo.spec.validate();
    return demo;
}

struct ExperimentConfig {
    std::string experiment;  // calendar | graph | retrieval
    std::string method;
    int runs = 1;
    uint64_t seed = 0;
    std::map<std::string, double> params;
    std::map<std::string, std::string> paths;  // corpus, questions, ...
    std::string out_dir;

    double param(const std::string& name, double fallback) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }
};

namespace detail {

inline void check_rate(const ExperimentConfig& c, const std::string& name) {
    auto it = c.params.find(name);
    if (it != c.params.end() && (it->second < 0.0 || it->second > 1.0)) {
        throw config_error("config field params." + name + " out of [0,1]: " +
                           std::to_string(it->second));
    }
}

}  // namespace detail

// Documented defaults: calendar budget 6; graph tau_suff 0.4, theta_corr
// 0.5; retrieval tau 0.8, alpha 0.4, buckets 50/50/50.
inline ExperimentConfig apply_defaults(ExperimentConfig c) {
    auto put = [&](const std::string& k, double v) { c.params.emplace(k, v); };
    if (c.experiment == "calendar") {
        put("budget", 6);
        put("drift_rate", 0.0);
        put("noise_fn", 0.0);
        put("noise_fp", 0.0);
    } else if (c.experiment == "graph") {
        put("tau_suff", 0.4);
        put("theta_corr", 0.5);
        put("n", 200);
    } else if (c.experiment == "retrieval") {
        put("tau", 0.8);
        put("alpha", 0.4);
        put("oracle_confidence", 1.0);
        put("easy", 50);
        put("medium", 50);
        put("hard", 50);
    }
    if (const char* env = std::getenv("DECIDER_OUT_DIR")) c.out_dir = env;
    return c;
}

inline void validate(const ExperimentConfig& c) {
    if (c.experiment != "calendar" && c.experiment != "graph" && c.experiment != "retrieval") {
        throw config_error("config field experiment must be calendar|graph|retrieval, got '" +
                           c.experiment + "'");
    }
    if (c.runs < 1) throw config_error("config field runs must be >= 1");
    for (const char* rate : {"drift_rate", "noise_fn", "noise_fp", "tau", "alpha", "tau_suff",
                             "theta_corr", "oracle_confidence"}) {
        detail::check_rate(c, rate);
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("config file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("malformed config " + path + ": " + e.what());
    }
    ExperimentConfig c;
    try {
        c.experiment = j.at("experiment").get<std::string>();
        c.method = j.value("method", std::string("dc"));
        c.runs = j.value("runs", 1);
        c.seed = j.value("seed", static_cast<uint64_t>(0));
        c.out_dir = j.value("out_dir", std::string());
        if (j.contains("params")) {
            for (const auto& [k, v] : j.at("params").items()) {
                if (v.is_number()) {
                    c.params[k] = v.get<double>();
                } else if (v.is_string()) {
                    c.paths[k] = v.get<std::string>();
                } else {
                    throw config_error("config field params." + k + " must be number or string");
                }
            }
        }
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error("config " + path + ": " + e.what());
    }
    c = apply_defaults(std::move(c));
    validate(c);
    return c;
}

}  // namespace decider::harness
