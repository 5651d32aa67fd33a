#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decider/core/rng.hpp"
#include "decider/graph/org_graph.hpp"
#include "decider/graph/search.hpp"
#include "decider/trace/trace.hpp"

namespace decider::graph {

enum class GraphMethod { dc, retry };

inline const char* to_string(GraphMethod m) { return m == GraphMethod::dc ? "dc" : "retry"; }

struct GraphScenario {
    std::string id;
    std::map<int, uint8_t> known;  // attr index -> value index
    int target = 0;
    std::optional<int> forced_first_visit;
    int budget = 5;
};

inline json graph_scenario_to_json(const GraphScenario& s) {
    json j;
    j["id"] = s.id;
    j["known"] = json::object();
    for (const auto& [attr, value] : s.known) {
        j["known"][attr_names()[attr]] = attr_values()[attr][value];
    }
    j["target"] = s.target;
    j["forced_first_visit"] = s.forced_first_visit ? json(*s.forced_first_visit) : json(nullptr);
    j["budget"] = s.budget;
    return j;
}

namespace detail {

struct EpisodeCounters {
    int turns_used = 0;
    int clarify = 0;
    int backtrack = 0;
    int wasted = 0;
};

inline void finish(EpisodeTrace& trace, const EpisodeCounters& c, bool success) {
    trace.success = success;
    trace.metrics["turns"] = c.turns_used;
    trace.metrics["clarifications"] = c.clarify;
    trace.metrics["backtracks"] = c.backtrack;
    trace.metrics["wasted"] = c.wasted;
}

}  // namespace detail

// DC: compute signals, apply the policy, act. Clarifying reveals one
// unknown attribute of the target (the one with the best guaranteed
// narrowing). Traversals visit the forced decoy first when the scenario
// mandates one, then untried candidates in ascending id order; the engine
// checks ground truth on each visit (id equality with the target), a denial
// rejects the node and may trigger elimination, a confirmation pins the
// correctness signal at the upper clamp. accept is terminal and free; every
// other action consumes budget.
//
// Two glue details keep the recorded trace and the policy inputs honest at
// once: the trace always logs p_suff as 1/|candidates| (query ambiguity),
// while post-traversal decisions feed the policy 1/|untried|, the ambiguity
// over the still-actionable pool. The policy's `turn` input is the count of
// completed budget-consuming turns.
inline EpisodeTrace run_graph_episode(GraphMethod method, const GraphScenario& scenario,
                                      const OrgGraph& g, uint64_t seed = 0) {
    EpisodeTrace trace;
    trace.scenario_id = scenario.id;
    trace.method_id = to_string(method);
    trace.seed = seed;

    SearchState state = initial_state(g, scenario.known, scenario.budget);
    if (std::find(state.candidates.begin(), state.candidates.end(), scenario.target) ==
        state.candidates.end()) {
        throw data_error("scenario " + scenario.id + ": target does not match known attributes");
    }

    detail::EpisodeCounters counters;
    double p_corr_last = 1.0;
    bool just_traversed = false;
    bool any_traversal = false;
    int rec_turn = 0;
    bool success = false;

    if (method == GraphMethod::retry) {
        // Blind visiting in seeded order (forced decoy first); no
        // clarification, no elimination, stop on a confirmed match.
        Rng rng(seed ^ 0x6AFB0C51ULL);
        std::vector<int> order = state.candidates;
        rng.shuffle(order);
        if (scenario.forced_first_visit) {
            auto it = std::find(order.begin(), order.end(), *scenario.forced_first_visit);
            if (it != order.end()) {
                order.erase(it);
                order.insert(order.begin(), *scenario.forced_first_visit);
            }
        }
        for (int id : order) {
            if (counters.turns_used == scenario.budget) break;
            ++counters.turns_used;
            bool correct = id == scenario.target;
            if (!correct) ++counters.wasted;
            TurnRecord rec;
            rec.turn = ++rec_turn;
            rec.signals["p_suff"] = compute_p_suff(state);
            rec.signals["p_corr"] = correct ? 0.95 : 0.05;
            rec.flags["just_traversed"] = any_traversal;
            rec.action = make_action(any_traversal ? ActionKind::backtrack : ActionKind::execute);
            rec.action.payload["candidate"] = std::to_string(id);
            rec.outcome.valid = correct;
            rec.outcome.observations["visited"] = id;
            rec.outcome.observations["correct"] = correct;
            trace = append_turn(std::move(trace), std::move(rec));
            any_traversal = true;
            if (correct) {
                TurnRecord acc;
                acc.turn = ++rec_turn;
                acc.signals["p_suff"] = compute_p_suff(state);
                acc.signals["p_corr"] = 0.95;
                acc.flags["just_traversed"] = true;
                acc.action = make_action(ActionKind::accept);
                acc.action.payload["candidate"] = std::to_string(id);
                acc.outcome.valid = true;
                acc.outcome.observations["accepted"] = id;
                trace = append_turn(std::move(trace), std::move(acc));
                success = true;
                break;
            }
        }
        detail::finish(trace, counters, success);
        return trace;
    }

    while (true) {
        if (state.candidates.empty()) break;  // belief state collapsed; episode fails
        double p_suff_record = compute_p_suff(state);
        double p_suff_policy =
            just_traversed
                ? 1.0 / static_cast<double>(std::max<size_t>(1, state.untried.size()))
                : p_suff_record;
        Action action =
            graph_policy(p_suff_policy, p_corr_last, just_traversed,
                         static_cast<int>(state.untried.size()),
                         static_cast<int>(state.hidden.size()), counters.turns_used);
        if (action.kind == ActionKind::clarify && state.hidden.empty()) {
            // Nothing left to ask; the actionable fallback is another visit.
            action = make_action(state.untried.empty() ? ActionKind::accept
                                                       : ActionKind::backtrack);
        }
        if (action.kind == ActionKind::execute && state.untried.empty()) {
            action = make_action(ActionKind::accept);
        }

        TurnRecord rec;
        rec.turn = ++rec_turn;
        rec.signals["p_suff"] = p_suff_record;
        rec.signals["p_corr"] = p_corr_last;
        rec.flags["just_traversed"] = just_traversed;

        if (action.kind == ActionKind::accept) {
            success = state.last_visited && *state.last_visited == scenario.target;
            rec.action = action;
            if (state.last_visited) rec.action.payload["candidate"] = std::to_string(*state.last_visited);
            rec.outcome.valid = success;
            rec.outcome.observations["accepted"] =
                state.last_visited ? json(*state.last_visited) : json(nullptr);
            trace = append_turn(std::move(trace), std::move(rec));
            break;
        }

        if (counters.turns_used == scenario.budget) break;  // budget exhausted, no accept

        if (action.kind == ActionKind::clarify) {
            int attr = pick_clarify_attribute(state, g);
            uint8_t answer = g.nodes[static_cast<size_t>(scenario.target)].values[attr];
            state.known[attr] = answer;
            state.hidden.erase(std::remove(state.hidden.begin(), state.hidden.end(), attr),
                               state.hidden.end());
            auto matches = [&](int id) { return g.nodes[static_cast<size_t>(id)].values[attr] == answer; };
            std::erase_if(state.candidates, [&](int id) { return !matches(id); });
            std::erase_if(state.untried, [&](int id) { return !matches(id); });
            ++counters.turns_used;
            ++counters.clarify;
            rec.action = make_action(ActionKind::clarify);
            rec.action.payload["attribute"] = attr_names()[attr];
            rec.outcome.valid = true;
            rec.outcome.observations["asked"] = attr_names()[attr];
            rec.outcome.observations["answer"] = attr_values()[attr][answer];
            rec.outcome.observations["candidates_after"] = state.candidates.size();
            trace = append_turn(std::move(trace), std::move(rec));
            just_traversed = false;
            continue;
        }

        // execute / backtrack: visit a node
        int visit_id = -1;
        if (!any_traversal && scenario.forced_first_visit &&
            std::find(state.untried.begin(), state.untried.end(), *scenario.forced_first_visit) !=
                state.untried.end()) {
            visit_id = *scenario.forced_first_visit;
        } else {
            visit_id = state.untried.front();  // ascending id order
        }
        const PersonNode& node = g.nodes[static_cast<size_t>(visit_id)];
        ++counters.turns_used;
        if (action.kind == ActionKind::backtrack) ++counters.backtrack;
        any_traversal = true;
        state.last_visited = visit_id;
        bool correct = visit_id == scenario.target;

        std::vector<int> eliminated;
        if (correct) {
            p_corr_last = 0.95;  // confirmed match: no remaining doubt beyond the clamp
            std::erase(state.untried, visit_id);
        } else {
            ++counters.wasted;
            // With nothing hidden the structural estimate is undefined; the
            // denial itself is all the evidence there is.
            p_corr_last = state.hidden.empty() ? 0.05 : estimate_p_corr(node, state, g);
            RejectedInfo info;
            info.id = visit_id;
            for (int attr : state.hidden) info.observed_hidden[attr] = node.values[attr];
            bool has_untried_sharer = false;
            for (int id : state.untried) {
                if (id == visit_id || state.hidden.empty()) continue;
                bool same = true;
                for (int attr : state.hidden) {
                    if (g.nodes[static_cast<size_t>(id)].values[attr] != node.values[attr]) same = false;
                }
                if (same) has_untried_sharer = true;
            }
            if (has_untried_sharer) {
                // The observed hidden profile rules out a whole group, so the
                // candidate pool shrinks without a clarification turn.
                std::vector<int> before = state.candidates;
                state = eliminate_candidates(std::move(state), node, g);
                for (int id : before) {
                    if (id != visit_id &&
                        std::find(state.candidates.begin(), state.candidates.end(), id) ==
                            state.candidates.end()) {
                        eliminated.push_back(id);
                    }
                }
            } else {
                // No group evidence; the node just leaves the actionable pool.
                std::erase(state.untried, visit_id);
            }
            state.rejected.push_back(std::move(info));
        }

        rec.action = action;
        rec.action.payload["candidate"] = std::to_string(visit_id);
        rec.outcome.valid = correct;
        rec.outcome.observations["visited"] = visit_id;
        rec.outcome.observations["visited_name"] = node.name;
        rec.outcome.observations["correct"] = correct;
        rec.outcome.observations["p_corr_after"] = p_corr_last;
        rec.outcome.observations["eliminated"] = eliminated;
        rec.outcome.observations["candidates_after"] = state.candidates.size();
        trace = append_turn(std::move(trace), std::move(rec));
        just_traversed = true;
    }

    detail::finish(trace, counters, success);
    return trace;
}

struct GraphAggregate {
    double success_rate = 0.0;
    double wasted_traversals = 0.0;
    double clarify_count = 0.0;
    double backtrack_count = 0.0;
};

inline GraphAggregate graph_metrics(const std::vector<EpisodeTrace>& traces) {
    if (traces.empty()) throw precondition_error("graph_metrics: no traces");
    GraphAggregate agg;
    for (const auto& tr : traces) {
        agg.success_rate += tr.success ? 1.0 : 0.0;
        agg.wasted_traversals += tr.metrics.at("wasted");
        agg.clarify_count += tr.metrics.at("clarifications");
        agg.backtrack_count += tr.metrics.at("backtracks");
    }
    double n = static_cast<double>(traces.size());
    agg.success_rate /= n;
    agg.wasted_traversals /= n;
    agg.clarify_count /= n;
    agg.backtrack_count /= n;
    return agg;
}

}  // namespace decider::graph
