#pragma once

#include <map>
#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/core/signal.hpp"

namespace decider {

// Everything a decision rule may look at on one turn. Rules read it,
// never write it.
struct DecisionContext {
    std::map<std::string, Signal> signals;
    std::map<std::string, bool> flags;
    std::map<std::string, long long> counters;
    std::vector<std::string> history;

    double signal_value(const std::string& name, double fallback) const {
        auto it = signals.find(name);
        return it == signals.end() ? fallback : it->second.value;
    }

    bool flag(const std::string& name, bool fallback = false) const {
        auto it = flags.find(name);
        return it == flags.end() ? fallback : it->second;
    }

    long long counter(const std::string& name, long long fallback = 0) const {
        auto it = counters.find(name);
        return it == counters.end() ? fallback : it->second;
    }

    void set_signal(Signal s) { signals[s.name] = std::move(s); }

    // Enforces the structural invariants; throws data_error on violation.
    void validate() const {
        for (const auto& [name, sig] : signals) {
            if (sig.value < 0.0 || sig.value > 1.0) {
                throw data_error("context signal '" + name + "' out of [0,1]");
            }
        }
        for (const auto& [name, v] : counters) {
            if (v < 0) throw data_error("context counter '" + name + "' negative");
        }
        auto turn_it = counters.find("turn");
        auto budget_it = counters.find("budget");
        if (turn_it != counters.end() && budget_it != counters.end() &&
            turn_it->second > budget_it->second) {
            throw data_error("context turn exceeds budget");
        }
        if (turn_it != counters.end() &&
            static_cast<long long>(history.size()) != turn_it->second) {
            throw data_error("context history length does not equal turn");
        }
    }
};

}  // namespace decider
