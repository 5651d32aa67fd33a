#pragma once

#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/trace/trace.hpp"

namespace decider {

struct ReplayResult {
    bool success = false;
    int rounds = 0;  // stop round index: 0, 1 or 2
};

struct RoundView {
    double p_dense = 0.0;
    double p_llm = 0.0;
    bool gold_present = false;
};

// Pulls the per-round component signals and gold flags out of a stored
// retrieval episode. Every round up to the budget must be present,
// whether or not the live controller reached it.
inline std::vector<RoundView> round_views(const EpisodeTrace& trace, int budget = 2) {
    std::vector<RoundView> rounds;
    for (const auto& t : trace.turns) {
        auto d = t.signals.find("p_dense");
        auto l = t.signals.find("p_llm");
        if (d == t.signals.end() || l == t.signals.end()) {
            throw incomplete_trace_error("episode " + trace.scenario_id +
                                         " lacks per-round component signals");
        }
        if (!t.outcome.observations.contains("gold_present")) {
            throw incomplete_trace_error("episode " + trace.scenario_id +
                                         " lacks per-round gold-presence flags");
        }
        rounds.push_back(RoundView{d->second, l->second,
                                   t.outcome.observations.at("gold_present").get<bool>()});
    }
    if (static_cast<int>(rounds.size()) < budget + 1) {
        throw incomplete_trace_error("episode " + trace.scenario_id + " has only " +
                                     std::to_string(rounds.size()) + " recorded rounds");
    }
    return rounds;
}

// Offline replay: recompute the composite signal per round, stop when it
// meets tau (forced stop at budget), score success off the stored gold
// flags. Never re-runs retrieval.
inline ReplayResult replay_threshold_controller(const EpisodeTrace& trace, double tau,
                                                double alpha, int budget = 2) {
    auto rounds = round_views(trace, budget);
    for (int r = 0; r <= budget; ++r) {
        double p = alpha * rounds[r].p_dense + (1.0 - alpha) * rounds[r].p_llm;
        if (p >= tau || r == budget) {
            return ReplayResult{rounds[r].gold_present, r};
        }
    }
    return ReplayResult{rounds[budget].gold_present, budget};  // unreachable
}

}  // namespace decider
