#pragma once

#include <string>
#include <vector>

#include "decider/retrieval/states.hpp"
#include "decider/signals/blend.hpp"
#include "decider/trace/trace.hpp"

namespace decider::retrieval {

enum class RetrievalMethod { dc_llm, dc_dense, dc_composite };

inline const char* to_string(RetrievalMethod m) {
    switch (m) {
        case RetrievalMethod::dc_llm: return "dc_llm";
        case RetrievalMethod::dc_dense: return "dc_dense";
        case RetrievalMethod::dc_composite: return "dc_composite";
    }
    return "dc_composite";
}

// The alpha a stored episode is replayed at: single-signal methods are the
// degenerate blends.
inline double effective_alpha(RetrievalMethod m, double alpha) {
    switch (m) {
        case RetrievalMethod::dc_llm: return 0.0;
        case RetrievalMethod::dc_dense: return 1.0;
        case RetrievalMethod::dc_composite: return alpha;
    }
    return alpha;
}

// Runs the controller over precomputed round states. Both component signals
// are recorded for every round, reached or not, so saved traces can be
// replayed and attributed offline without touching the index.
inline EpisodeTrace run_retrieval_episode(RetrievalMethod method, const RetrievalState& state,
                                          const ControllerConfig& config = {}) {
    config.validate();
    EpisodeTrace trace;
    trace.scenario_id = std::string(to_string(state.bucket)) + "/" + state.question_id;
    trace.method_id = to_string(method);
    trace.seed = 0;

    double alpha = effective_alpha(method, config.alpha);
    int stop_round = config.budget;
    bool stopped = false;
    int rounds_taken = 0;

    for (int r = 0; r <= config.budget; ++r) {
        size_t ri = static_cast<size_t>(r);
        double p_hat = alpha * state.dense[ri] + (1.0 - alpha) * state.llm[ri];

        TurnRecord rec;
        rec.turn = r + 1;
        rec.signals["p_dense"] = state.dense[ri];
        rec.signals["p_llm"] = state.llm[ri];
        rec.signals["p_hat"] = p_hat;
        rec.outcome.observations["gold_present"] = state.gold_present[ri];
        rec.outcome.observations["k"] = config.k_schedule[ri];

        if (!stopped) {
            Action action = controller_step(p_hat, r, config);
            rec.flags["reached"] = true;
            rec.action = action;
            rec.outcome.valid = action.kind != ActionKind::stop || state.gold_present[ri];
            if (action.kind == ActionKind::stop) {
                stopped = true;
                stop_round = r;
                rounds_taken = r;
            }
        } else {
            rec.flags["reached"] = false;
            rec.action = make_action("not_reached", ActionKind::custom);
            rec.outcome.valid = true;
        }
        trace = append_turn(std::move(trace), std::move(rec));
    }

    trace.success = state.gold_present[static_cast<size_t>(stop_round)];
    trace.metrics["rounds"] = rounds_taken;
    trace.metrics["stop_round"] = stop_round;
    trace.metrics["bucket"] = static_cast<double>(state.bucket);
    return trace;
}

struct RetrievalAggregate {
    double success_rate = 0.0;
    double avg_rounds = 0.0;
};

inline RetrievalAggregate retrieval_metrics(const std::vector<EpisodeTrace>& traces) {
    if (traces.empty()) throw precondition_error("retrieval_metrics: no traces");
    RetrievalAggregate agg;
    for (const auto& tr : traces) {
        agg.success_rate += tr.success ? 1.0 : 0.0;
        agg.avg_rounds += tr.metrics.at("rounds");
    }
    double n = static_cast<double>(traces.size());
    agg.success_rate /= n;
    agg.avg_rounds /= n;
    return agg;
}

}  // namespace decider::retrieval
