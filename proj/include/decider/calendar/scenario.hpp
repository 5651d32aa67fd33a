#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/core/json.hpp"

namespace decider::calendar {

inline const std::array<std::string, 4>& field_names() {
    static const std::array<std::string, 4> names = {"date", "start_time", "duration_min",
                                                     "attendees"};
    return names;
}

struct EventFields {
    std::string date;        // ISO-8601
    std::string start_time;  // HH:MM
    int duration_min = 0;
    std::vector<std::string> attendees;

    std::string value_of(const std::string& field) const {
        if (field == "date") return date;
        if (field == "start_time") return start_time;
        if (field == "duration_min") return std::to_string(duration_min);
        if (field == "attendees") {
            std::string out;
            for (const auto& a : attendees) {
                if (!out.empty()) out += ", ";
                out += a;
            }
            return out;
        }
        throw data_error("unknown event field: " + field);
    }
};

enum class Ambiguity { absent, unresolvable, not_applicable };

inline const char* to_string(Ambiguity a) {
    switch (a) {
        case Ambiguity::absent: return "absent";
        case Ambiguity::unresolvable: return "unresolvable";
        case Ambiguity::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

struct CalendarScenario {
    std::string id;
    int k = 0;
    Ambiguity ambiguity = Ambiguity::not_applicable;
    std::string initial_query;
    EventFields private_facts;
    std::vector<std::string> withheld;

    // Derived view of the initial query, so the oracle extractor never has
    // to parse prose: raw value per mentioned field plus which mentions are
    // vague references.
    std::map<std::string, std::string> initial_values;
    std::set<std::string> initially_usable;
    std::set<std::string> vague_fields;
};

inline EventFields base_facts() {
    return EventFields{"2026-02-17", "11:30", 30, {"Jack"}};
}

namespace detail {

inline std::string vague_phrase(const std::string& field) {
    if (field == "date") return "Jack's usual slot";
    if (field == "start_time") return "Jack's usual time";
    if (field == "attendees") return "the usual team";
    throw data_error("no vague phrasing for field: " + field);
}

inline std::string assemble_query(const std::set<std::string>& present,
                                  const std::set<std::string>& vague, const EventFields& facts) {
    std::string q = "Schedule a meeting";
    auto mention = [&](const std::string& field) { return present.count(field) || vague.count(field); };
    auto text_for = [&](const std::string& field) {
        return vague.count(field) ? vague_phrase(field) : facts.value_of(field);
    };
    if (mention("attendees")) q += " with " + text_for("attendees");
    if (mention("date")) q += " on " + text_for("date");
    if (mention("start_time")) q += " at " + text_for("start_time");
    if (mention("duration_min")) q += " for " + std::to_string(facts.duration_min) + " minutes";
    return q + ".";
}

inline CalendarScenario build(int k, Ambiguity amb) {
    // Fixed omission order, so each k is a canonical scenario.
    static const std::vector<std::string> omission_order = {"duration_min", "date", "start_time",
                                                            "attendees"};
    // Vague-replacement priority over the fields still present.
    static const std::vector<std::string> vague_priority = {"date", "start_time", "attendees"};

    CalendarScenario s;
    s.k = k;
    s.ambiguity = amb;
    s.private_facts = base_facts();
    for (int i = 0; i < k; ++i) s.withheld.push_back(omission_order[i]);

    std::set<std::string> present(field_names().begin(), field_names().end());
    for (const auto& w : s.withheld) present.erase(w);

    std::set<std::string> vague;
    if (amb == Ambiguity::unresolvable) {
        for (const auto& f : vague_priority) {
            if (present.count(f)) {
                vague.insert(f);
                present.erase(f);
                break;
            }
        }
    }

    s.initial_query = assemble_query(present, vague, s.private_facts);
    s.initially_usable = present;
    s.vague_fields = vague;
    for (const auto& f : present) s.initial_values[f] = s.private_facts.value_of(f);
    for (const auto& f : vague) s.initial_values[f] = vague_phrase(f);

    std::string suffix = amb == Ambiguity::absent       ? "_absent"
                         : amb == Ambiguity::unresolvable ? "_unresolvable"
                                                          : "";
    s.id = "cal_k" + std::to_string(k) + suffix;
    return s;
}

}  // namespace detail

// The 8 canonical scenarios from one base fact set. k=0 and k=4 take no
// ambiguity type (k=4 unresolvable would duplicate k=4 absent).
inline std::vector<CalendarScenario> generate_scenarios() {
    std::vector<CalendarScenario> out;
    out.push_back(detail::build(0, Ambiguity::not_applicable));
    for (int k = 1; k <= 3; ++k) {
        out.push_back(detail::build(k, Ambiguity::absent));
        out.push_back(detail::build(k, Ambiguity::unresolvable));
    }
    out.push_back(detail::build(4, Ambiguity::not_applicable));
    return out;
}

inline json scenario_to_json(const CalendarScenario& s) {
    json j;
    j["id"] = s.id;
    j["k"] = s.k;
    j["ambiguity"] = to_string(s.ambiguity);
    j["initial_query"] = s.initial_query;
    j["private_facts"] = json{{"date", s.private_facts.date},
                              {"start_time", s.private_facts.start_time},
                              {"duration_min", s.private_facts.duration_min},
                              {"attendees", s.private_facts.attendees}};
    j["withheld"] = s.withheld;
    j["vague_fields"] = std::vector<std::string>(s.vague_fields.begin(), s.vague_fields.end());
    return j;
}

}  // namespace decider::calendar
