#pragma once

#include <optional>
#include <vector>

#include "decider/graph/episode.hpp"
#include "decider/graph/org_graph.hpp"
#include "decider/graph/search.hpp"

namespace decider::graph {

// Default graph seed. Pinned so that the S1-S5 fixtures below exist on the
// generated graph: S5 needs exactly two random nodes matching
// (Engineering, Alpha, Manager), both L1 and outside Tokyo, and S2/S4 need
// candidate pools of the documented sizes with the right clarify cascades.
inline constexpr uint64_t kDefaultGraphSeed = 14;

namespace detail {

inline std::vector<int> matching_ids(const OrgGraph& g, const std::map<int, uint8_t>& known) {
    std::vector<int> out;
    for (const auto& node : g.nodes) {
        if (matches_known(node, known)) out.push_back(node.id);
    }
    return out;
}

// Replays the clarify phase of the DC episode (answers come from the
// target) and returns the narrowed candidate pools after each question.
inline std::vector<std::vector<int>> clarify_cascade(const OrgGraph& g,
                                                     const std::map<int, uint8_t>& known,
                                                     int target, int steps) {
    SearchState state = initial_state(g, known, /*budget=*/99);
    std::vector<std::vector<int>> pools;
    for (int i = 0; i < steps; ++i) {
        int attr = pick_clarify_attribute(state, g);
        uint8_t answer = g.nodes[static_cast<size_t>(target)].values[attr];
        state.known[attr] = answer;
        state.hidden.erase(std::remove(state.hidden.begin(), state.hidden.end(), attr),
                           state.hidden.end());
        std::erase_if(state.candidates, [&](int id) {
            return g.nodes[static_cast<size_t>(id)].values[attr] != answer;
        });
        pools.push_back(state.candidates);
    }
    return pools;
}

inline std::vector<ActionKind> consuming_actions(const EpisodeTrace& trace) {
    std::vector<ActionKind> out;
    for (const auto& t : trace.turns) {
        if (t.action.kind != ActionKind::accept) out.push_back(t.action.kind);
    }
    return out;
}

inline bool action_sequence_is(const EpisodeTrace& trace, const std::vector<ActionKind>& want) {
    return consuming_actions(trace) == want && !trace.turns.empty() &&
           trace.turns.back().action.kind == ActionKind::accept;
}

}  // namespace detail

// S1: fully specified query, single candidate. execute -> accept.
inline GraphScenario find_s1(const OrgGraph& g) {
    for (const auto& node : g.nodes) {
        for (int omit = 0; omit < kNumAttrs; ++omit) {
            std::map<int, uint8_t> known;
            for (int a = 0; a < kNumAttrs; ++a) {
                if (a != omit) known[a] = node.values[a];
            }
            if (detail::matching_ids(g, known).size() == 1) {
                return GraphScenario{"S1", known, node.id, std::nullopt, 5};
            }
        }
    }
    throw generation_error("find_s1: no unique 4-attribute description in this graph");
}

// S3: two candidates, forced first visit to the one that is not the target.
// The two differ on the hidden attribute, so no elimination can fire.
inline GraphScenario find_s3(const OrgGraph& g) {
    for (const auto& node : g.nodes) {
        for (int omit = 0; omit < kNumAttrs; ++omit) {
            std::map<int, uint8_t> known;
            for (int a = 0; a < kNumAttrs; ++a) {
                if (a != omit) known[a] = node.values[a];
            }
            auto ids = detail::matching_ids(g, known);
            if (ids.size() != 2) continue;
            const auto& lo = g.nodes[static_cast<size_t>(ids[0])];
            const auto& hi = g.nodes[static_cast<size_t>(ids[1])];
            if (lo.values[omit] == hi.values[omit]) continue;
            return GraphScenario{"S3", known, ids[1], ids[0], 5};
        }
    }
    throw generation_error("find_s3: no two-candidate description in this graph");
}

// S2: two known attributes, 13 candidates. The policy clarifies twice, the
// pool lands on two nodes with the target second in visit order, and the
// wrong first visit is recovered by one backtrack.
inline GraphScenario find_s2(const OrgGraph& g) {
    for (int a1 = 0; a1 < kNumAttrs; ++a1) {
        for (int a2 = a1 + 1; a2 < kNumAttrs; ++a2) {
            for (uint8_t v1 = 0; v1 < kValuesPerAttr; ++v1) {
                for (uint8_t v2 = 0; v2 < kValuesPerAttr; ++v2) {
                    std::map<int, uint8_t> known{{a1, v1}, {a2, v2}};
                    auto pool = detail::matching_ids(g, known);
                    if (pool.size() != 13) continue;
                    for (int target : pool) {
                        auto pools = detail::clarify_cascade(g, known, target, 2);
                        if (pools[0].size() < 3 || pools[1].size() != 2) continue;
                        if (pools[1][1] != target) continue;  // wrong node must be visited first
                        GraphScenario s{"S2", known, target, std::nullopt, 5};
                        EpisodeTrace probe = run_graph_episode(GraphMethod::dc, s, g);
                        if (!probe.success ||
                            !detail::action_sequence_is(probe,
                                                        {ActionKind::clarify, ActionKind::clarify,
                                                         ActionKind::execute, ActionKind::backtrack}))
                            continue;
                        if (probe.metrics.at("wasted") != 1.0) continue;
                        return s;
                    }
                }
            }
        }
    }
    throw generation_error("find_s2: no 13-candidate scenario with the required cascade");
}

// S4: two known attributes, 10 candidates, forced decoy. Two clarifications
// narrow 10 -> 3 -> 2; the decoy fails with a hidden value the target does
// not share, and one backtrack lands on the target.
inline GraphScenario find_s4(const OrgGraph& g) {
    for (int a1 = 0; a1 < kNumAttrs; ++a1) {
        for (int a2 = a1 + 1; a2 < kNumAttrs; ++a2) {
            for (uint8_t v1 = 0; v1 < kValuesPerAttr; ++v1) {
                for (uint8_t v2 = 0; v2 < kValuesPerAttr; ++v2) {
                    std::map<int, uint8_t> known{{a1, v1}, {a2, v2}};
                    auto pool = detail::matching_ids(g, known);
                    if (pool.size() != 10) continue;
                    for (int target : pool) {
                        auto pools = detail::clarify_cascade(g, known, target, 2);
                        if (pools[0].size() != 3 || pools[1].size() != 2) continue;
                        int decoy = pools[1][0] == target ? pools[1][1] : pools[1][0];
                        GraphScenario s{"S4", known, target, decoy, 6};
                        EpisodeTrace probe = run_graph_episode(GraphMethod::dc, s, g);
                        if (!probe.success ||
                            !detail::action_sequence_is(probe,
                                                        {ActionKind::clarify, ActionKind::clarify,
                                                         ActionKind::execute, ActionKind::backtrack}))
                            continue;
                        if (probe.metrics.at("wasted") != 1.0) continue;
                        return s;
                    }
                }
            }
        }
    }
    throw generation_error("find_s4: no 10-candidate scenario with the required cascade");
}

// S5: the injected subgraph plus exactly two random (Engineering, Alpha,
// Manager) nodes. Query names those three attributes; clarifying location
// leaves the five Tokyo nodes; the forced decoy's failure eliminates its
// level-sharing peer without a clarification turn.
inline GraphScenario build_s5(const OrgGraph& g) {
    std::map<int, uint8_t> known{{attr_index("department"), value_index(0, "Engineering")},
                                 {attr_index("role"), value_index(1, "Manager")},
                                 {attr_index("project"), value_index(3, "Alpha")}};
    auto pool = detail::matching_ids(g, known);
    if (pool.size() != 12) {
        throw generation_error("build_s5: expected 12 matching nodes, found " +
                               std::to_string(pool.size()) + " (pin a different graph seed)");
    }
    int tokyo = attr_index("location");
    int level = attr_index("level");
    for (int id : pool) {
        if (id >= 10) {
            const auto& node = g.nodes[static_cast<size_t>(id)];
            if (node.value_name(tokyo) == "Tokyo" || node.value_name(level) != "L1") {
                throw generation_error("build_s5: extra matcher " + std::to_string(id) +
                                       " breaks the fixture (pin a different graph seed)");
            }
        }
    }
    return GraphScenario{"S5", known, kS5TargetId, kS5DecoyId, 5};
}

inline std::vector<GraphScenario> build_default_scenarios(const OrgGraph& g) {
    return {find_s1(g), find_s2(g), find_s3(g), find_s4(g), build_s5(g)};
}

inline GraphScenario scenario_by_id(const OrgGraph& g, const std::string& id) {
    for (auto& s : build_default_scenarios(g)) {
        if (s.id == id) return s;
    }
    throw config_error("unknown graph scenario: " + id);
}

}  // namespace decider::graph
