#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "decider/core/action.hpp"
#include "decider/core/errors.hpp"
#include "decider/graph/org_graph.hpp"

namespace decider::graph {

struct RejectedInfo {
    int id = 0;
    std::map<int, uint8_t> observed_hidden;  // attr index -> value at rejection time
};

struct SearchState {
    std::map<int, uint8_t> known;  // attr index -> value index
    std::vector<int> hidden;       // attr indices not yet known
    std::vector<int> candidates;   // node ids matching `known`, ascending
    std::vector<int> untried;      // candidates not yet visited or rejected
    std::vector<RejectedInfo> rejected;
    std::optional<int> last_visited;
    int turn = 0;
    int budget = 0;
};

inline bool matches_known(const PersonNode& node, const std::map<int, uint8_t>& known) {
    for (const auto& [attr, value] : known) {
        if (node.values[attr] != value) return false;
    }
    return true;
}

inline SearchState initial_state(const OrgGraph& g, const std::map<int, uint8_t>& known,
                                 int budget) {
    SearchState s;
    s.known = known;
    for (int a = 0; a < kNumAttrs; ++a) {
        if (!known.count(a)) s.hidden.push_back(a);
    }
    for (const auto& node : g.nodes) {
        if (matches_known(node, known)) s.candidates.push_back(node.id);
    }
    s.untried = s.candidates;
    s.budget = budget;
    return s;
}

// p_suff = 1 / |candidates|: how unambiguous the current description is.
inline double compute_p_suff(const SearchState& s) {
    if (s.candidates.empty()) throw inconsistent_state_error("compute_p_suff: no candidates");
    return 1.0 / static_cast<double>(s.candidates.size());
}

// Structural plausibility of the visited node: for each hidden attribute,
// the fraction of active peer candidates (excluding the visited node and
// prior rejections) sharing its value, averaged across hidden attributes.
// Visiting similar-looking nodes to past rejections costs a penalty of
// 0.15 + 0.20 * overlap once the profiles agree on at least half the hidden
// attributes. Clamped to [0.05, 0.95]. With no peers left there is no
// contradicting evidence and the pre-penalty estimate is 1.
inline double estimate_p_corr(const PersonNode& visited, const SearchState& s,
                              const OrgGraph& g) {
    if (s.hidden.empty()) throw precondition_error("estimate_p_corr: no hidden attributes");

    std::vector<int> peers;
    for (int id : s.candidates) {
        if (id == visited.id) continue;
        bool was_rejected = false;
        for (const auto& r : s.rejected) {
            if (r.id == id) was_rejected = true;
        }
        if (!was_rejected) peers.push_back(id);
    }

    double avg = 1.0;
    if (!peers.empty()) {
        double sum = 0.0;
        for (int attr : s.hidden) {
            int sharing = 0;
            for (int id : peers) {
                if (g.nodes[static_cast<size_t>(id)].values[attr] == visited.values[attr]) ++sharing;
            }
            sum += static_cast<double>(sharing) / static_cast<double>(peers.size());
        }
        avg = sum / static_cast<double>(s.hidden.size());
    }

    double worst_overlap = -1.0;
    for (const auto& r : s.rejected) {
        int matched = 0;
        for (int attr : s.hidden) {
            auto it = r.observed_hidden.find(attr);
            if (it != r.observed_hidden.end() && it->second == visited.values[attr]) ++matched;
        }
        double overlap = static_cast<double>(matched) / static_cast<double>(s.hidden.size());
        if (overlap >= 0.5) worst_overlap = std::max(worst_overlap, overlap);
    }
    if (worst_overlap >= 0.0) avg -= 0.15 + 0.20 * worst_overlap;

    return std::clamp(avg, 0.05, 0.95);
}

// Removes the rejected node from candidates/untried, plus every untried
// candidate whose values on all currently hidden attributes equal the
// rejected node's observed values.
inline SearchState eliminate_candidates(SearchState s, const PersonNode& rejected,
                                        const OrgGraph& g) {
    auto same_hidden_profile = [&](int id) {
        const PersonNode& node = g.nodes[static_cast<size_t>(id)];
        for (int attr : s.hidden) {
            if (node.values[attr] != rejected.values[attr]) return false;
        }
        return true;
    };
    std::vector<int> removed;
    for (int id : s.untried) {
        if (id != rejected.id && same_hidden_profile(id)) removed.push_back(id);
    }
    removed.push_back(rejected.id);
    auto drop = [&](std::vector<int>& v) {
        v.erase(std::remove_if(v.begin(), v.end(),
                               [&](int id) {
                                   return std::find(removed.begin(), removed.end(), id) !=
                                          removed.end();
                               }),
                v.end());
    };
    drop(s.candidates);
    drop(s.untried);
    return s;
}

// The fixed joint-belief policy. `turn` counts completed (budget-consuming)
// turns. tau_suff gates when the pool is small enough to act on;
// theta_corr is the accept cutoff after a traversal.
inline Action graph_policy(double p_suff, double p_corr, bool just_traversed, int n_untried,
                           int n_hidden, int turn, double tau_suff = 0.4,
                           double theta_corr = 0.5) {
    if (just_traversed) {
        if (p_corr >= theta_corr) return make_action(ActionKind::accept);
        if (n_untried == 0) return make_action(ActionKind::accept);
        if (p_suff < tau_suff && turn > 2) return make_action(ActionKind::clarify);
        if (n_untried > 0) return make_action(ActionKind::backtrack);
        return make_action(ActionKind::clarify);
    }
    if (p_suff >= tau_suff) return make_action(ActionKind::execute);
    if (n_hidden <= 1) return make_action(ActionKind::execute);
    return make_action(ActionKind::clarify);
}

// Clarification asks about the hidden attribute with the best guaranteed
// narrowing: minimize the worst-case candidate count over possible answers,
// ties broken by attribute name.
inline int pick_clarify_attribute(const SearchState& s, const OrgGraph& g) {
    if (s.hidden.empty()) throw precondition_error("pick_clarify_attribute: nothing hidden");
    int best_attr = -1;
    int best_worst = 0;
    for (int attr : s.hidden) {
        std::array<int, kValuesPerAttr> counts{};
        for (int id : s.candidates) {
            counts[g.nodes[static_cast<size_t>(id)].values[attr]]++;
        }
        int worst = *std::max_element(counts.begin(), counts.end());
        if (best_attr == -1 || worst < best_worst ||
            (worst == best_worst && attr_names()[attr] < attr_names()[best_attr])) {
            best_attr = attr;
            best_worst = worst;
        }
    }
    return best_attr;
}

}  // namespace decider::graph
