#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mlt {

// Plain string records, independent of the library's data model.
struct RawLayer {
    std::string id;
    bool bipartite = false;
    std::optional<double> latitude, longitude;
};

struct RawNode {
    std::string id;
    std::optional<std::string> node_type;
};

struct RawState {
    std::string layer, node;
};

struct RawEdge {
    std::string layer_from, node_from, layer_to, node_to;
    std::optional<double> weight;  // absent means 1
    bool intralayer() const { return layer_from == layer_to; }
    double w() const { return weight.value_or(1.0); }
};

struct RawNetwork {
    std::vector<RawLayer> layers;
    std::vector<RawNode> nodes;
    std::vector<RawState> states;
    std::vector<RawEdge> edges;
    bool directed = false;
    bool directed_interlayer = false;

    std::string to_json() const;
    /// Edge table only; the other tables are left for synthesis.
    std::string edges_csv() const;
    RawNetwork reversed_undirected() const;
};

struct GenOptions {
    bool directed = false;
    bool bipartite = false;
    bool weighted = false;
    int min_layers = 1, max_layers = 6;
    int min_nodes = 2, max_nodes = 25;
    double presence = 0.65;
    double intra_p = 0.25;
    double replica_p = 0.35;
    double general_p = 0.02;
    double self_loop_p = 0.03;
};

RawNetwork random_network(std::mt19937_64& rng, const GenOptions& options);

/// The eight {directed, bipartite, weighted} combinations cycled by index.
GenOptions combination(int index);

/// Layers and nodes in order of first appearance among the state nodes.
RawNetwork simple(const std::vector<RawState>& states, const std::vector<RawEdge>& edges, bool directed = false,
                  bool directed_interlayer = false);

/// Stress network with the given counts; layers x nodes fully present.
RawNetwork stress_network(std::uint64_t seed, int layers = 8, int nodes = 100, int intralayer = 8000,
                          int interlayer = 7000);

}  // namespace mlt
