#pragma once

#include <charconv>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "decider/core/action.hpp"
#include "decider/core/context.hpp"
#include "decider/core/errors.hpp"

namespace decider {

using Evaluator = std::function<double(const Action&, const DecisionContext&)>;
using FeasibilityPredicate = std::function<bool(const Action&, const DecisionContext&)>;

// Reward and cost evaluators are referenced by name so that routing-style
// setups can live entirely in configuration files.
class EvaluatorRegistry {
  public:
    void add_evaluator(const std::string& name, Evaluator fn) { evaluators_[name] = std::move(fn); }
    void add_feasibility(const std::string& name, FeasibilityPredicate fn) {
        predicates_[name] = std::move(fn);
    }

    const Evaluator& evaluator(const std::string& name) const {
        auto it = evaluators_.find(name);
        if (it == evaluators_.end()) throw config_error("unknown evaluator: " + name);
        return it->second;
    }

    const FeasibilityPredicate& feasibility(const std::string& name) const {
        auto it = predicates_.find(name);
        if (it == predicates_.end()) throw config_error("unknown feasibility predicate: " + name);
        return it->second;
    }

  private:
    std::map<std::string, Evaluator> evaluators_;
    std::map<std::string, FeasibilityPredicate> predicates_;
};

inline double payload_number(const Action& a, const std::string& key) {
    auto it = a.payload.find(key);
    if (it == a.payload.end()) throw evaluation_error("action '" + a.id + "' has no payload key '" + key + "'");
    double out = 0.0;
    auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), out);
    if (ec != std::errc{} || p != it->second.data() + it->second.size()) {
        throw evaluation_error("payload '" + key + "' of action '" + a.id + "' is not a number");
    }
    return out;
}

// Built-ins used by the shipped demo configs: rewards/costs read straight off
// action payload numbers, feasibility "all" admits everything.
inline EvaluatorRegistry default_evaluator_registry() {
    EvaluatorRegistry reg;
    reg.add_evaluator("payload_quality",
                      [](const Action& a, const DecisionContext&) { return payload_number(a, "quality"); });
    reg.add_evaluator("payload_price",
                      [](const Action& a, const DecisionContext&) { return payload_number(a, "price"); });
    reg.add_evaluator("payload_latency",
                      [](const Action& a, const DecisionContext&) { return payload_number(a, "latency"); });
    reg.add_feasibility("all", [](const Action&, const DecisionContext&) { return true; });
    reg.add_feasibility("within_budget", [](const Action& a, const DecisionContext& c) {
        return payload_number(a, "price") <= static_cast<double>(c.counter("budget", 0));
    });
    return reg;
}

struct CostTerm {
    std::string evaluator;
    double weight = 0.0;  // lambda_k >= 0
};

struct UtilitySpec {
    std::string reward;
    std::vector<CostTerm> costs;
    std::string feasibility = "all";

    void validate() const {
        for (const auto& c : costs) {
            if (c.weight < 0.0) throw config_error("cost weight for '" + c.evaluator + "' is negative");
        }
    }
};

// U(a,c) = R(a,c) - sum_k lambda_k * C_k(a,c)
inline double linear_utility(const Action& action, const DecisionContext& context,
                             const UtilitySpec& spec, const EvaluatorRegistry& reg) {
    spec.validate();
    double u = 0.0;
    try {
        u = reg.evaluator(spec.reward)(action, context);
        for (const auto& cost : spec.costs) {
            u -= cost.weight * reg.evaluator(cost.evaluator)(action, context);
        }
    } catch (const evaluation_error&) {
        throw;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw evaluation_error(std::string("evaluator failed: ") + e.what());
    }
    return u;
}

// Constrained argmax over the feasible set. Ties break toward the
// lexicographically smallest action id so the choice is total and repeatable.
inline Action utility_argmax(const DecisionContext& context, const std::vector<Action>& actions,
                             const UtilitySpec& spec, const EvaluatorRegistry& reg) {
    if (actions.empty()) throw precondition_error("utility_argmax: empty action set");
    const auto& feasible = reg.feasibility(spec.feasibility);
    const Action* best = nullptr;
    double best_u = 0.0;
    for (const auto& a : actions) {
        if (!feasible(a, context)) continue;
        double u = linear_utility(a, context, spec, reg);
        if (best == nullptr || u > best_u || (u == best_u && a.id < best->id)) {
            best = &a;
            best_u = u;
        }
    }
    if (best == nullptr) throw no_feasible_action_error("utility_argmax: no feasible action");
    return *best;
}

}  // namespace decider
