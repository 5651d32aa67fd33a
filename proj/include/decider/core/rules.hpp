#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "decider/core/action.hpp"
#include "decider/core/context.hpp"
#include "decider/core/errors.hpp"

namespace decider {

using RuleParams = std::map<std::string, std::string>;

struct RuleOutcome {
    Action chosen;
    std::vector<Action> offered;
};

using DecisionRule = std::function<RuleOutcome(const RuleParams&, const DecisionContext&)>;

// Snapshot of one decision: what was visible, what was offered, what was
// chosen, and by which rule. Serialization schema is shared with the trace
// tooling (see decider/trace/trace.hpp).
struct DecisionRecord {
    DecisionContext context;
    std::vector<Action> offered;
    Action chosen;
    std::string rule_id;
    RuleParams rule_params;
};

// Immutable after startup; shared freely across concurrent episodes.
class RuleRegistry {
  public:
    void add(const std::string& id, DecisionRule rule) { rules_[id] = std::move(rule); }

    bool has(const std::string& id) const { return rules_.count(id) > 0; }

    const DecisionRule& rule(const std::string& id) const {
        auto it = rules_.find(id);
        if (it == rules_.end()) throw config_error("unknown rule id: " + id);
        return it->second;
    }

  private:
    std::map<std::string, DecisionRule> rules_;
};

inline double param_number(const RuleParams& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw config_error("rule parameter '" + key + "' is not a number: " + it->second);
    }
}

// execute when the sufficiency signal meets the threshold, clarify otherwise.
// Equality executes.
inline Action threshold_rule(const Signal& p_suff, double tau) {
    if (p_suff.value < 0.0 || p_suff.value > 1.0) {
        throw precondition_error("threshold_rule: signal out of [0,1]");
    }
    return p_suff.value >= tau ? make_action(ActionKind::execute) : make_action(ActionKind::clarify);
}

inline RuleRegistry default_rule_registry() {
    RuleRegistry reg;
    reg.add("threshold", [](const RuleParams& params, const DecisionContext& ctx) {
        double tau = param_number(params, "tau", 1.0);
        auto it = ctx.signals.find("p_suff");
        if (it == ctx.signals.end()) throw precondition_error("threshold rule needs signal p_suff");
        return RuleOutcome{threshold_rule(it->second, tau),
                           {make_action(ActionKind::execute), make_action(ActionKind::clarify)}};
    });
    return reg;
}

// Dispatch to a registered rule. Never mutates the context; the returned
// record owns snapshots of everything it cites.
inline DecisionRecord decide(const RuleRegistry& registry, const std::string& rule_id,
                             const RuleParams& params, const DecisionContext& context) {
    RuleOutcome out = registry.rule(rule_id)(params, context);
    bool member = false;
    for (const auto& a : out.offered) {
        if (a.id == out.chosen.id) member = true;
    }
    if (!member) throw data_error("rule '" + rule_id + "' chose an action outside its offered set");
    return DecisionRecord{context, out.offered, out.chosen, rule_id, params};
}

}  // namespace decider
