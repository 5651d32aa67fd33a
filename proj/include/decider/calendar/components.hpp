#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decider/calendar/scenario.hpp"
#include "decider/core/action.hpp"
#include "decider/core/errors.hpp"
#include "decider/core/rng.hpp"
#include "decider/signals/noise.hpp"

namespace decider::calendar {

// Structured conversation: (speaker, text, field->raw value), with vague
// mentions flagged so the oracle never parses prose.
struct ConversationTurn {
    std::string speaker;  // "user" or "assistant"
    std::string text;
    std::map<std::string, std::string> values;
    std::set<std::string> vague;
};

using Conversation = std::vector<ConversationTurn>;

inline Conversation opening_conversation(const CalendarScenario& s) {
    ConversationTurn t;
    t.speaker = "user";
    t.text = s.initial_query;
    t.values = s.initial_values;
    t.vague = s.vague_fields;
    return {t};
}

// --- sufficiency oracle ------------------------------------------------------

struct ExtractorReport {
    std::map<std::string, bool> fields;  // the four scheduling fields

    double p_suff() const {
        int confirmed = 0;
        for (const auto& [f, present] : fields) confirmed += present ? 1 : 0;
        return static_cast<double>(confirmed) / 4.0;
    }

    std::vector<std::string> missing() const {
        std::vector<std::string> out;
        for (const auto& f : field_names()) {
            if (!fields.at(f)) out.push_back(f);
        }
        return out;
    }

    std::vector<std::string> confirmed() const {
        std::vector<std::string> out;
        for (const auto& f : field_names()) {
            if (fields.at(f)) out.push_back(f);
        }
        return out;
    }
};

inline ExtractorReport empty_report() {
    ExtractorReport r;
    for (const auto& f : field_names()) r.fields[f] = false;
    return r;
}

// Which fields the conversation actually provides in usable form. Vague
// references do not count.
inline std::set<std::string> usable_fields(const Conversation& conv) {
    std::set<std::string> usable;
    for (const auto& turn : conv) {
        for (const auto& [field, value] : turn.values) {
            if (!turn.vague.count(field)) usable.insert(field);
        }
    }
    return usable;
}

// A field is confirmed iff an explicit usable value appears somewhere in the
// conversation. The result is OR-ed with the prior report (confirmed-field
// lock), so confirmations never regress.
inline ExtractorReport oracle_extract(const Conversation& conv, const CalendarScenario&,
                                      const ExtractorReport& prior) {
    auto usable = usable_fields(conv);
    ExtractorReport fresh = empty_report();
    for (const auto& f : field_names()) fresh.fields[f] = usable.count(f) > 0;
    ExtractorReport locked;
    for (const auto& f : field_names()) {
        locked.fields[f] = fresh.fields[f] || prior.fields.at(f);
    }
    return locked;
}

// Same, with estimator error injected before the lock is applied.
inline ExtractorReport noisy_extract(const Conversation& conv, const CalendarScenario&,
                                     const ExtractorReport& prior, const NoiseSpec& noise) {
    auto usable = usable_fields(conv);
    ExtractorReport fresh = empty_report();
    for (const auto& f : field_names()) fresh.fields[f] = usable.count(f) > 0;
    fresh.fields = apply_noise(fresh.fields, noise);
    ExtractorReport locked;
    for (const auto& f : field_names()) {
        locked.fields[f] = fresh.fields[f] || prior.fields.at(f);
    }
    return locked;
}

// --- decision rule -----------------------------------------------------------

// Three branches, no tunable parameters:
//   1. a failed execution is always followed by clarify (no-blind-retry)
//   2. p_suff == 1.0 -> execute
//   3. otherwise clarify, covering all unconfirmed fields at once
inline Action dc_policy(double p_suff, std::optional<ActionKind> last_action,
                        std::optional<bool> last_valid) {
    if (last_action == ActionKind::execute && last_valid == false) {
        return make_action(ActionKind::clarify);
    }
    if (p_suff >= 1.0) return make_action(ActionKind::execute);
    return make_action(ActionKind::clarify);
}

// --- question generation -----------------------------------------------------

enum class QuestionMode { targeted, drifting };

struct GeneratedQuestion {
    std::string question;
    std::vector<std::string> targets;
};

inline std::string human_name(const std::string& field) {
    if (field == "date") return "the date";
    if (field == "start_time") return "the start time";
    if (field == "duration_min") return "the duration in minutes";
    if (field == "attendees") return "who should attend";
    return field;
}

// Targeted mode asks exactly about `missing`. Drifting mode reproduces a
// question generator that wanders off the requested fields: with seeded
// probability drift_rate, one missing target is swapped for an
// already-confirmed field.
inline GeneratedQuestion generate_question(const std::vector<std::string>& missing,
                                           QuestionMode mode, double drift_rate, Rng& rng,
                                           const std::vector<std::string>& confirmed = {}) {
    if (missing.empty()) throw precondition_error("generate_question: no missing fields");
    std::vector<std::string> targets = missing;
    if (mode == QuestionMode::drifting && !confirmed.empty() && rng.bernoulli(drift_rate)) {
        size_t drop = static_cast<size_t>(rng.below(targets.size()));
        const std::string& swap_in = confirmed[rng.below(confirmed.size())];
        targets.erase(targets.begin() + static_cast<long>(drop));
        if (std::find(targets.begin(), targets.end(), swap_in) == targets.end()) {
            targets.push_back(swap_in);
        }
        std::sort(targets.begin(), targets.end());
    }
    std::string q = "Could you tell me ";
    for (size_t i = 0; i < targets.size(); ++i) {
        if (i > 0) q += i + 1 == targets.size() ? " and " : ", ";
        q += human_name(targets[i]);
    }
    q += "?";
    return GeneratedQuestion{q, targets};
}

// --- user simulator ----------------------------------------------------------

// Scripted user holding the private facts. Answers exactly what was asked,
// truthfully, and volunteers nothing else. Knows the truth even for fields
// the initial query referenced vaguely.
inline ConversationTurn simulate_user(const std::vector<std::string>& targets,
                                      const EventFields& facts) {
    ConversationTurn t;
    t.speaker = "user";
    if (targets.empty()) {
        t.text = "Okay.";
        return t;
    }
    std::string text;
    for (const auto& field : targets) {
        if (field == "date") text += "The meeting is on " + facts.date + ". ";
        else if (field == "start_time") text += "It starts at " + facts.start_time + ". ";
        else if (field == "duration_min")
            text += "The meeting lasts for " + std::to_string(facts.duration_min) + " minutes. ";
        else if (field == "attendees") text += "Please invite " + facts.value_of("attendees") + ". ";
        t.values[field] = facts.value_of(field);
    }
    if (!text.empty()) text.pop_back();
    t.text = text;
    return t;
}

// --- executor ----------------------------------------------------------------

struct ExecutionResult {
    std::map<std::string, std::optional<std::string>> event;  // null where unconfirmed
    bool valid = false;
};

// Assembles the event from the most recent value per confirmed field (vague
// strings are copied literally if a faulty report confirmed them), null
// elsewhere. Valid iff all four fields are non-null and match the facts.
inline ExecutionResult execute_event(const ExtractorReport& report, const Conversation& conv,
                                     const EventFields& facts) {
    ExecutionResult res;
    for (const auto& f : field_names()) res.event[f] = std::nullopt;
    for (const auto& f : field_names()) {
        if (!report.fields.at(f)) continue;
        for (auto it = conv.rbegin(); it != conv.rend(); ++it) {
            auto v = it->values.find(f);
            if (v != it->values.end()) {
                res.event[f] = v->second;
                break;
            }
        }
    }
    res.valid = true;
    for (const auto& f : field_names()) {
        if (!res.event[f].has_value() || *res.event[f] != facts.value_of(f)) {
            res.valid = false;
            break;
        }
    }
    return res;
}

}  // namespace decider::calendar
