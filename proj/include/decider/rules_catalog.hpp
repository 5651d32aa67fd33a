#pragma once

#include "decider/calendar/components.hpp"
#include "decider/core/rules.hpp"
#include "decider/graph/search.hpp"

namespace decider {

// Registry with the generic threshold rule plus the environment policies
// exposed under stable ids, so any policy can be driven through decide().
inline RuleRegistry standard_rule_registry() {
    RuleRegistry reg = default_rule_registry();

    reg.add("calendar_dc", [](const RuleParams&, const DecisionContext& ctx) {
        auto it = ctx.signals.find("p_suff");
        if (it == ctx.signals.end()) throw precondition_error("calendar_dc needs signal p_suff");
        std::optional<ActionKind> last_action;
        std::optional<bool> last_valid;
        if (ctx.flag("last_execute_failed")) {
            last_action = ActionKind::execute;
            last_valid = false;
        }
        return RuleOutcome{calendar::dc_policy(it->second.value, last_action, last_valid),
                           {make_action(ActionKind::execute), make_action(ActionKind::clarify)}};
    });

    reg.add("graph_dc", [](const RuleParams& params, const DecisionContext& ctx) {
        double tau_suff = param_number(params, "tau_suff", 0.4);
        double theta_corr = param_number(params, "theta_corr", 0.5);
        Action chosen = graph::graph_policy(
            ctx.signal_value("p_suff", 0.0), ctx.signal_value("p_corr", 1.0),
            ctx.flag("just_traversed"), static_cast<int>(ctx.counter("n_untried")),
            static_cast<int>(ctx.counter("n_hidden")), static_cast<int>(ctx.counter("turn")),
            tau_suff, theta_corr);
        return RuleOutcome{chosen,
                           {make_action(ActionKind::execute), make_action(ActionKind::clarify),
                            make_action(ActionKind::backtrack), make_action(ActionKind::accept)}};
    });

    return reg;
}

}  // namespace decider
