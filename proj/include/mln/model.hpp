#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace mln {

/// Attribute values are scalar (real or boolean) or string; nothing nested.
using AttributeValue = std::variant<double, bool, std::string>;
using Attributes = std::map<std::string, AttributeValue, std::less<>>;

enum class LinkClass : std::uint8_t { intralayer, interlayer };
enum class Coupling : std::uint8_t { none, replica, general };
enum class Direction : std::uint8_t { undirected, in, out };

struct EdgeClass {
    LinkClass link = LinkClass::intralayer;
    Coupling coupling = Coupling::none;
    bool operator==(const EdgeClass&) const = default;
};

/// Intralayer iff the layer ids match; interlayer links are replica couplings
/// when they join a node to itself and general couplings otherwise.
EdgeClass classify_edge(std::string_view layer_from, std::string_view node_from,
                        std::string_view layer_to, std::string_view node_to);

struct LayerDef {
    std::string id;
    std::string display_name;
    std::optional<double> latitude;
    std::optional<double> longitude;
    bool bipartite = false;
    Attributes attributes;

    bool has_coordinates() const { return latitude.has_value() && longitude.has_value(); }
};

struct PhysicalNode {
    std::string id;
    std::optional<std::string> node_type;
    Attributes attributes;
};

struct StateNode {
    std::size_t layer = 0;
    std::size_t node = 0;
    Attributes attributes;
};

struct ExtendedEdge {
    std::size_t layer_from = 0;
    std::size_t node_from = 0;
    std::size_t layer_to = 0;
    std::size_t node_to = 0;
    double weight = 1.0;
    std::optional<bool> per_link_directed;
    // Derived by the snapshot from the endpoint indices.
    EdgeClass kind;

    bool intralayer() const { return layer_from == layer_to; }
    bool self_loop() const { return intralayer() && node_from == node_to; }
};

struct DirectednessFlags {
    bool directed = false;
    bool directed_interlayer = false;
    bool operator==(const DirectednessFlags&) const = default;
};

/// The two node sets of a bipartite layer, keyed by node_type label.
struct BipartiteSet {
    std::string label;
    std::vector<std::size_t> nodes;
};

/// Validated, immutable multilayer network.
///
/// Layers are indexed in input order, which is also the stacking order used by
/// every layout. Edges reference layers and physical nodes by index. The
/// constructor re-checks the structural invariants and throws mln::Error with
/// code "invalid-snapshot" when one fails; ingest reports the same problems
/// with locators before getting here.
class NetworkSnapshot {
public:
    NetworkSnapshot(std::vector<LayerDef> layers, std::vector<PhysicalNode> nodes,
                    std::vector<StateNode> state_nodes, std::vector<ExtendedEdge> edges,
                    DirectednessFlags flags);

    const std::vector<LayerDef>& layers() const { return layers_; }
    const std::vector<PhysicalNode>& nodes() const { return nodes_; }
    const std::vector<StateNode>& state_nodes() const { return state_nodes_; }
    const std::vector<ExtendedEdge>& edges() const { return edges_; }
    const DirectednessFlags& flags() const { return flags_; }
    bool directed() const { return flags_.directed; }
    bool directed_interlayer() const { return flags_.directed_interlayer; }

    std::size_t layer_count() const { return layers_.size(); }
    std::size_t node_count() const { return nodes_.size(); }

    std::optional<std::size_t> find_layer(std::string_view id) const;
    std::optional<std::size_t> find_node(std::string_view id) const;
    std::optional<std::size_t> find_state_node(std::size_t layer, std::size_t node) const;
    // Throwing lookups: codes unknown-layer, unknown-node, unknown-state-node.
    std::size_t layer_index(std::string_view id) const;
    std::size_t node_index(std::string_view id) const;
    std::size_t state_index(std::size_t layer, std::size_t node) const;

    /// X_alpha as ascending node indices.
    std::span<const std::size_t> members(std::size_t layer) const { return members_[layer]; }
    std::size_t layer_size(std::size_t layer) const { return members_[layer].size(); }
    std::span<const std::size_t> layer_state_nodes(std::size_t layer) const {
        return layer_states_[layer];
    }
    /// E_alpha: intralayer edges of the layer without self-loops.
    std::span<const std::size_t> layer_edges(std::size_t layer) const { return layer_edges_[layer]; }
    std::span<const std::size_t> layer_self_loops(std::size_t layer) const {
        return layer_loops_[layer];
    }
    std::span<const std::size_t> interlayer_edges() const { return interlayer_; }

    /// Non-self-loop intralayer edges touching state node s, either end.
    std::span<const std::size_t> incident_intralayer(std::size_t s) const { return inc_intra_[s]; }
    std::span<const std::size_t> incident_interlayer(std::size_t s) const { return inc_inter_[s]; }

    /// Binary node-by-layer matrix, 1 where the node is present in the layer.
    const Eigen::MatrixXi& presence() const { return presence_; }
    int participation(std::size_t node) const { return presence_.row(static_cast<Eigen::Index>(node)).sum(); }

    /// Whether the class this edge belongs to is directed.
    bool edge_directed(const ExtendedEdge& e) const {
        return e.intralayer() ? flags_.directed : flags_.directed_interlayer;
    }
    /// Endpoint node pair of an intralayer edge; sorted when undirected.
    std::pair<std::size_t, std::size_t> node_pair_key(const ExtendedEdge& e) const;

    /// Node sets of a bipartite layer, sorted by label (set A first). Empty for
    /// unipartite layers.
    const std::vector<BipartiteSet>& bipartite_sets(std::size_t layer) const {
        return bipartite_[layer];
    }

    /// a^alpha_ij when the layers match, a^{alpha beta}_ij otherwise; 0 when
    /// there is no such edge. Throws unknown-state-node.
    double adjacency_weight(std::size_t layer_a, std::size_t node_i, std::size_t layer_b,
                            std::size_t node_j) const;
    double adjacency_weight(std::string_view layer_a, std::string_view node_i,
                            std::string_view layer_b, std::string_view node_j) const;

private:
    std::vector<LayerDef> layers_;
    std::vector<PhysicalNode> nodes_;
    std::vector<StateNode> state_nodes_;
    std::vector<ExtendedEdge> edges_;
    DirectednessFlags flags_;

    std::unordered_map<std::string, std::size_t> layer_ids_;
    std::unordered_map<std::string, std::size_t> node_ids_;
    std::unordered_map<std::uint64_t, std::size_t> state_ids_;
    std::unordered_map<std::uint64_t, double> adjacency_;

    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::vector<std::size_t>> layer_states_;
    std::vector<std::vector<std::size_t>> layer_edges_;
    std::vector<std::vector<std::size_t>> layer_loops_;
    std::vector<std::size_t> interlayer_;
    std::vector<std::vector<std::size_t>> inc_intra_;
    std::vector<std::vector<std::size_t>> inc_inter_;
    std::vector<std::vector<BipartiteSet>> bipartite_;
    Eigen::MatrixXi presence_;

    std::uint64_t state_key(std::size_t layer, std::size_t node) const {
        return static_cast<std::uint64_t>(layer) * nodes_.size() + node;
    }
    std::uint64_t pair_key(std::size_t from_state, std::size_t to_state) const {
        return static_cast<std::uint64_t>(from_state) * state_nodes_.size() + to_state;
    }
};

std::string_view to_string(LinkClass c);
std::string_view to_string(Coupling c);
std::string_view to_string(Direction d);

}  // namespace mln
