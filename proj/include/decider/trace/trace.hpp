#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "decider/core/action.hpp"
#include "decider/core/errors.hpp"
#include "decider/core/json.hpp"
#include "decider/core/rules.hpp"

namespace decider {

struct TurnOutcome {
    bool valid = true;
    json observations = json::object();
};

struct TurnRecord {
    int turn = 0;  // 1-based, strictly increasing within an episode
    std::map<std::string, double> signals;
    std::map<std::string, bool> flags;
    Action action;
    TurnOutcome outcome;
    std::string note;
};

struct EpisodeTrace {
    std::string scenario_id;
    std::string method_id;
    uint64_t seed = 0;
    std::vector<TurnRecord> turns;
    bool success = false;
    std::map<std::string, double> metrics;
};

inline EpisodeTrace append_turn(EpisodeTrace trace, TurnRecord record) {
    int expected = trace.turns.empty() ? 1 : trace.turns.back().turn + 1;
    if (record.turn != expected) {
        throw sequencing_error("append_turn: got turn " + std::to_string(record.turn) +
                               ", expected " + std::to_string(expected));
    }
    trace.turns.push_back(std::move(record));
    return trace;
}

// --- serialization -----------------------------------------------------------
// Line-delimited JSON, UTF-8. One episode is a header line, one line per
// turn, and a terminator line:
//   {"episode": {"scenario_id", "method_id", "seed"}}
//   {"turn", "signals", "flags", "action": {"id","kind","payload"}, "outcome": {"valid","observations"}}
//   {"success", "metrics"}

inline json action_to_json(const Action& a) {
    json j;
    j["id"] = a.id;
    j["kind"] = to_string(a.kind);
    j["payload"] = a.payload;
    return j;
}

inline Action action_from_json(const json& j) {
    Action a;
    a.id = j.at("id").get<std::string>();
    a.kind = action_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("payload")) {
        for (const auto& [k, v] : j.at("payload").items()) a.payload[k] = v.get<std::string>();
    }
    return a;
}

inline json turn_to_json(const TurnRecord& t) {
    json j;
    j["turn"] = t.turn;
    j["signals"] = t.signals;
    j["flags"] = t.flags;
    j["action"] = action_to_json(t.action);
    j["outcome"] = json{{"valid", t.outcome.valid}, {"observations", t.outcome.observations}};
    if (!t.note.empty()) j["note"] = t.note;
    return j;
}

inline TurnRecord turn_from_json(const json& j) {
    TurnRecord t;
    t.turn = j.at("turn").get<int>();
    for (const auto& [k, v] : j.at("signals").items()) t.signals[k] = v.get<double>();
    for (const auto& [k, v] : j.at("flags").items()) t.flags[k] = v.get<bool>();
    t.action = action_from_json(j.at("action"));
    t.outcome.valid = j.at("outcome").at("valid").get<bool>();
    t.outcome.observations = j.at("outcome").at("observations");
    if (j.contains("note")) t.note = j.at("note").get<std::string>();
    return t;
}

inline void write_episode(std::ostream& out, const EpisodeTrace& trace) {
    json header;
    header["episode"] =
        json{{"scenario_id", trace.scenario_id}, {"method_id", trace.method_id}, {"seed", trace.seed}};
    out << header.dump() << "\n";
    for (const auto& t : trace.turns) out << turn_to_json(t).dump() << "\n";
    json term;
    term["success"] = trace.success;
    term["metrics"] = trace.metrics;
    out << term.dump() << "\n";
}

inline void write_trace_file(const std::string& path, const std::vector<EpisodeTrace>& traces) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open trace file for writing: " + path);
    for (const auto& tr : traces) write_episode(out, tr);
}

inline std::vector<EpisodeTrace> read_trace_stream(std::istream& in) {
    std::vector<EpisodeTrace> traces;
    EpisodeTrace current;
    bool open = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.contains("episode")) {
            if (open) throw data_error("trace line " + std::to_string(lineno) + ": episode not terminated");
            current = EpisodeTrace{};
            const auto& e = j.at("episode");
            current.scenario_id = e.at("scenario_id").get<std::string>();
            current.method_id = e.at("method_id").get<std::string>();
            current.seed = e.at("seed").get<uint64_t>();
            open = true;
        } else if (j.contains("turn")) {
            if (!open) throw data_error("trace line " + std::to_string(lineno) + ": turn outside episode");
            current.turns.push_back(turn_from_json(j));
        } else if (j.contains("success")) {
            if (!open) throw data_error("trace line " + std::to_string(lineno) + ": stray terminator");
            current.success = j.at("success").get<bool>();
            for (const auto& [k, v] : j.at("metrics").items()) current.metrics[k] = v.get<double>();
            traces.push_back(std::move(current));
            open = false;
        } else {
            throw data_error("trace line " + std::to_string(lineno) + ": unrecognized record");
        }
    }
    if (open) throw data_error("trace stream ended inside an episode");
    return traces;
}

inline std::vector<EpisodeTrace> read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open trace file: " + path);
    return read_trace_stream(in);
}

// DecisionRecord shares the action/context schema above.
inline json decision_record_to_json(const DecisionRecord& r) {
    json j;
    json ctx;
    ctx["signals"] = json::object();
    for (const auto& [name, sig] : r.context.signals) ctx["signals"][name] = sig.value;
    ctx["flags"] = r.context.flags;
    ctx["counters"] = r.context.counters;
    ctx["history"] = r.context.history;
    j["context"] = ctx;
    j["offered"] = json::array();
    for (const auto& a : r.offered) j["offered"].push_back(action_to_json(a));
    j["chosen"] = action_to_json(r.chosen);
    j["rule_id"] = r.rule_id;
    j["rule_params"] = r.rule_params;
    return j;
}

}  // namespace decider
