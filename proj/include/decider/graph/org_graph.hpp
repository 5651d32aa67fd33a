#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/core/json.hpp"
#include "decider/core/rng.hpp"

namespace decider::graph {

inline constexpr int kNumAttrs = 5;
inline constexpr int kValuesPerAttr = 4;

inline const std::array<std::string, kNumAttrs>& attr_names() {
    static const std::array<std::string, kNumAttrs> names = {"department", "role", "location",
                                                             "project", "level"};
    return names;
}

inline const std::array<std::array<std::string, kValuesPerAttr>, kNumAttrs>& attr_values() {
    static const std::array<std::array<std::string, kValuesPerAttr>, kNumAttrs> values = {{
        {"Engineering", "Marketing", "Sales", "Finance"},
        {"Manager", "Analyst", "Engineer", "Lead"},
        {"New York", "London", "Tokyo", "Berlin"},
        {"Alpha", "Beta", "Gamma", "Delta"},
        {"L1", "L2", "L3", "L4"},
    }};
    return values;
}

inline int attr_index(const std::string& name) {
    for (int i = 0; i < kNumAttrs; ++i) {
        if (attr_names()[i] == name) return i;
    }
    throw data_error("unknown attribute: " + name);
}

inline uint8_t value_index(int attr, const std::string& value) {
    for (int v = 0; v < kValuesPerAttr; ++v) {
        if (attr_values()[attr][v] == value) return static_cast<uint8_t>(v);
    }
    throw data_error("unknown value '" + value + "' for attribute " + attr_names()[attr]);
}

struct PersonNode {
    int id = 0;
    std::string name;
    std::array<uint8_t, kNumAttrs> values{};

    const std::string& value_name(int attr) const { return attr_values()[attr][values[attr]]; }
};

inline int shared_attributes(const PersonNode& a, const PersonNode& b) {
    int shared = 0;
    for (int i = 0; i < kNumAttrs; ++i) shared += a.values[i] == b.values[i] ? 1 : 0;
    return shared;
}

struct OrgGraph {
    std::vector<PersonNode> nodes;
    std::vector<std::pair<int, int>> base_edges;   // pairs sharing >= 2 attributes
    std::vector<std::pair<int, int>> noisy_edges;  // pairs sharing <= 1, floor(0.15 * base)
    uint64_t seed = 0;
};

// The ten-node subgraph injected ahead of the random nodes. All share
// (Engineering, Alpha, Manager); location/level vary. Ids are assigned in
// this order, which puts S5_Node_F before S5_Target before S5_Node_F2 in
// ascending-id visit order.
struct InjectedProfile {
    const char* name;
    const char* location;
    const char* level;
};

inline const std::array<InjectedProfile, 10>& injected_profiles() {
    static const std::array<InjectedProfile, 10> rows = {{
        {"S5_Decoy_D", "Tokyo", "L1"},
        {"S5_Node_E", "Tokyo", "L1"},
        {"S5_Node_F", "Tokyo", "L2"},
        {"S5_Target", "Tokyo", "L3"},
        {"S5_Node_F2", "Tokyo", "L4"},
        {"S5_Node_A", "London", "L2"},
        {"S5_Node_B", "London", "L1"},
        {"S5_Node_C", "London", "L4"},
        {"S5_Node_G", "Berlin", "L2"},
        {"S5_Node_H", "Berlin", "L1"},
    }};
    return rows;
}

inline constexpr int kS5DecoyId = 0;
inline constexpr int kS5NodeEId = 1;
inline constexpr int kS5NodeFId = 2;
inline constexpr int kS5TargetId = 3;
inline constexpr int kS5NodeF2Id = 4;

inline OrgGraph generate_graph(int n = 200, uint64_t seed = 0) {
    if (n < 10) throw precondition_error("generate_graph: n must be >= 10");
    OrgGraph g;
    g.seed = seed;
    g.nodes.reserve(static_cast<size_t>(n));

    for (int i = 0; i < 10; ++i) {
        const auto& row = injected_profiles()[i];
        PersonNode node;
        node.id = i;
        node.name = row.name;
        node.values[0] = value_index(0, "Engineering");
        node.values[1] = value_index(1, "Manager");
        node.values[2] = value_index(2, row.location);
        node.values[3] = value_index(3, "Alpha");
        node.values[4] = value_index(4, row.level);
        g.nodes.push_back(node);
    }

    Rng rng(seed);
    for (int i = 10; i < n; ++i) {
        PersonNode node;
        node.id = i;
        node.name = "node_" + std::to_string(i);
        for (int a = 0; a < kNumAttrs; ++a) {
            node.values[a] = static_cast<uint8_t>(rng.below(kValuesPerAttr));
        }
        g.nodes.push_back(node);
    }

    std::vector<std::pair<int, int>> loose;  // pairs sharing <= 1 attribute
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (shared_attributes(g.nodes[i], g.nodes[j]) >= 2) {
                g.base_edges.emplace_back(i, j);
            } else {
                loose.emplace_back(i, j);
            }
        }
    }

    size_t noisy_count = static_cast<size_t>(0.15 * static_cast<double>(g.base_edges.size()));
    if (loose.size() < noisy_count) {
        throw generation_error("generate_graph: not enough low-overlap pairs for noisy edges");
    }
    // Seeded sample without replacement (partial Fisher-Yates).
    for (size_t k = 0; k < noisy_count; ++k) {
        size_t j = k + static_cast<size_t>(rng.below(loose.size() - k));
        std::swap(loose[k], loose[j]);
        g.noisy_edges.push_back(loose[k]);
    }
    return g;
}

inline json graph_to_json(const OrgGraph& g) {
    json j;
    j["seed"] = g.seed;
    j["nodes"] = json::array();
    for (const auto& node : g.nodes) {
        json nj;
        nj["id"] = node.id;
        nj["name"] = node.name;
        for (int a = 0; a < kNumAttrs; ++a) nj[attr_names()[a]] = node.value_name(a);
        j["nodes"].push_back(nj);
    }
    auto edges_json = [](const std::vector<std::pair<int, int>>& edges) {
        json arr = json::array();
        for (const auto& [a, b] : edges) arr.push_back(json::array({a, b}));
        return arr;
    };
    j["base_edges"] = edges_json(g.base_edges);
    j["noisy_edges"] = edges_json(g.noisy_edges);
    return j;
}

}  // namespace decider::graph
