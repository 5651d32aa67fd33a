#pragma once

#include <map>
#include <string>

#include "decider/core/errors.hpp"

namespace decider {

enum class ActionKind { execute, clarify, backtrack, accept, stop, expand, custom };

inline const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::execute: return "execute";
        case ActionKind::clarify: return "clarify";
        case ActionKind::backtrack: return "backtrack";
        case ActionKind::accept: return "accept";
        case ActionKind::stop: return "stop";
        case ActionKind::expand: return "expand";
        case ActionKind::custom: return "custom";
    }
    return "custom";
}

inline ActionKind action_kind_from_string(const std::string& s) {
    if (s == "execute") return ActionKind::execute;
    if (s == "clarify") return ActionKind::clarify;
    if (s == "backtrack") return ActionKind::backtrack;
    if (s == "accept") return ActionKind::accept;
    if (s == "stop") return ActionKind::stop;
    if (s == "expand") return ActionKind::expand;
    if (s == "custom") return ActionKind::custom;
    throw data_error("unknown action kind: " + s);
}

// Payload keys follow a per-kind convention:
//   clarify   -> "targets" (comma-joined field names) or "attribute"
//   expand    -> "k" (next cumulative depth)
//   execute   -> "candidate" (node id) when visiting a graph node
//   backtrack -> "candidate"
struct Action {
    std::string id;
    ActionKind kind = ActionKind::custom;
    std::map<std::string, std::string> payload;

    bool operator==(const Action& o) const {
        return id == o.id && kind == o.kind && payload == o.payload;
    }
};

inline Action make_action(ActionKind kind) { return Action{to_string(kind), kind, {}}; }

inline Action make_action(std::string id, ActionKind kind) {
    return Action{std::move(id), kind, {}};
}

}  // namespace decider
