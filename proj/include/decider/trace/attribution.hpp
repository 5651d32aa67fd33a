#pragma once

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "decider/calendar/components.hpp"
#include "decider/calendar/scenario.hpp"
#include "decider/core/errors.hpp"
#include "decider/trace/trace.hpp"

namespace decider {

enum class FailureCategory {
    signal_estimation,
    decision_policy,
    question_generation,
    execution,
    early_stop_dense,
    early_stop_llm,
    early_stop_both,
    corpus_gap,
};

inline const char* to_string(FailureCategory c) {
    switch (c) {
        case FailureCategory::signal_estimation: return "signal_estimation";
        case FailureCategory::decision_policy: return "decision_policy";
        case FailureCategory::question_generation: return "question_generation";
        case FailureCategory::execution: return "execution";
        case FailureCategory::early_stop_dense: return "early_stop_dense";
        case FailureCategory::early_stop_llm: return "early_stop_llm";
        case FailureCategory::early_stop_both: return "early_stop_both";
        case FailureCategory::corpus_gap: return "corpus_gap";
    }
    return "execution";
}

struct AttributionLabel {
    FailureCategory category = FailureCategory::execution;
    std::vector<std::tuple<int, std::string, double>> evidence;  // (turn, field, value)
};

// Classifies a failed retrieval episode from its logged signal trace alone.
// Exhausting the budget without the gold passage ever appearing is a corpus
// gap; otherwise the stop round tells us which component(s) signed off on
// stopping: any component individually at or above tau is implicated.
inline AttributionLabel attribute_retrieval_failure(const EpisodeTrace& trace, double tau) {
    if (trace.success) {
        throw precondition_error("attribute_retrieval_failure: episode succeeded");
    }
    int stop_turn = -1;
    bool gold_ever = false;
    for (const auto& t : trace.turns) {
        if (t.outcome.observations.contains("gold_present") &&
            t.outcome.observations.at("gold_present").get<bool>()) {
            gold_ever = true;
        }
        if (t.flags.count("reached") && t.flags.at("reached") &&
            t.action.kind == ActionKind::stop) {
            stop_turn = t.turn;
        }
    }
    if (stop_turn < 0) throw incomplete_trace_error("no stop action recorded");
    const TurnRecord& stop = trace.turns[static_cast<size_t>(stop_turn - 1)];
    int budget_rounds = static_cast<int>(trace.turns.size());

    AttributionLabel label;
    if (stop_turn == budget_rounds && !gold_ever) {
        label.category = FailureCategory::corpus_gap;
        label.evidence.emplace_back(stop_turn, "gold_present", 0.0);
        return label;
    }
    double dense = stop.signals.at("p_dense");
    double llm = stop.signals.at("p_llm");
    bool dense_high = dense >= tau;
    bool llm_high = llm >= tau;
    if (dense_high && llm_high) {
        label.category = FailureCategory::early_stop_both;
    } else if (dense_high) {
        label.category = FailureCategory::early_stop_dense;
    } else if (llm_high) {
        label.category = FailureCategory::early_stop_llm;
    } else {
        // Neither component cleared tau on its own; blame the dominant one.
        label.category = dense >= llm ? FailureCategory::early_stop_dense
                                      : FailureCategory::early_stop_llm;
    }
    label.evidence.emplace_back(stop_turn, "p_dense", dense);
    label.evidence.emplace_back(stop_turn, "p_llm", llm);
    return label;
}

namespace detail {

inline std::set<std::string> split_csv(const std::string& joined) {
    std::set<std::string> out;
    std::string cur;
    for (char c : joined) {
        if (c == ',') {
            if (!cur.empty()) out.insert(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
}

}  // namespace detail

// Walks a failed calendar episode through the fixed diagnosis cascade:
// estimation -> policy -> question generation -> execution. The ground
// truth for "fields actually present" is replayed from the scenario plus
// the logged clarification targets (the scripted user answers exactly what
// was asked, truthfully).
inline AttributionLabel attribute_calendar_failure(const EpisodeTrace& trace,
                                                   const calendar::CalendarScenario& scenario) {
    if (trace.success) {
        throw precondition_error("attribute_calendar_failure: episode succeeded");
    }
    AttributionLabel label;

    // 1. signal estimation: any per-field report disagreeing with the fields
    //    usable in the conversation at that turn.
    std::set<std::string> usable = scenario.initially_usable;
    for (const auto& t : trace.turns) {
        const auto& report = t.outcome.observations.at("report");
        for (const auto& f : calendar::field_names()) {
            bool reported = report.at(f).get<bool>();
            bool actual = usable.count(f) > 0;
            if (reported != actual) {
                label.category = FailureCategory::signal_estimation;
                label.evidence.emplace_back(t.turn, f, reported ? 1.0 : 0.0);
                return label;
            }
        }
        if (t.action.kind == ActionKind::clarify) {
            for (const auto& target :
                 detail::split_csv(t.action.payload.count("targets") ? t.action.payload.at("targets")
                                                                     : std::string())) {
                usable.insert(target);
            }
        }
    }

    // 2. decision policy: any chosen action differing from the deterministic
    //    rule on the logged inputs.
    std::optional<ActionKind> last_action;
    std::optional<bool> last_valid;
    for (const auto& t : trace.turns) {
        Action expected = calendar::dc_policy(t.signals.at("p_suff"), last_action, last_valid);
        if (expected.kind != t.action.kind) {
            label.category = FailureCategory::decision_policy;
            label.evidence.emplace_back(t.turn, "action", t.action.kind == ActionKind::execute ? 1.0 : 0.0);
            return label;
        }
        last_action = t.action.kind;
        last_valid = t.action.kind == ActionKind::execute ? std::optional<bool>(t.outcome.valid)
                                                          : std::nullopt;
    }

    // 3. question generation: any clarify question targeting a field outside
    //    the logged missing set.
    for (const auto& t : trace.turns) {
        if (t.action.kind != ActionKind::clarify) continue;
        std::set<std::string> missing;
        for (const auto& m : t.outcome.observations.at("missing")) {
            missing.insert(m.get<std::string>());
        }
        for (const auto& q : t.outcome.observations.at("question_targets")) {
            if (!missing.count(q.get<std::string>())) {
                label.category = FailureCategory::question_generation;
                label.evidence.emplace_back(t.turn, q.get<std::string>(), 1.0);
                return label;
            }
        }
    }

    // 4. everything logged is consistent; the executor is what failed.
    label.category = FailureCategory::execution;
    for (const auto& t : trace.turns) {
        if (t.action.kind == ActionKind::execute && !t.outcome.valid) {
            label.evidence.emplace_back(t.turn, "valid", 0.0);
        }
    }
    return label;
}

}  // namespace decider
