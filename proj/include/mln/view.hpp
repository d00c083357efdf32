#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mln/histogram.hpp"
#include "mln/model.hpp"

namespace mln {

enum class Mode { network, map, layer_view, grid, meta_network, dashboard, data };
std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view name);

struct AttributeFilter {
    enum class Scope { node, state_node, layer };
    enum class Op { eq, ne, lt, le, gt, ge, contains };
    Scope scope = Scope::node;
    std::string key;
    Op op = Op::eq;
    AttributeValue value;

    bool operator==(const AttributeFilter&) const = default;
};

/// Display filters. Weight thresholds are inclusive lower bounds; interlayer
/// links stay hidden unless show_interlayer is set.
struct Filters {
    double min_weight_intra = 0.0;
    double min_weight_inter = 0.0;
    bool show_interlayer = false;
    std::optional<std::set<std::string>> visible_layers;  // nullopt: all layers
    std::string node_query;                               // case-insensitive substring of node_id
    std::vector<AttributeFilter> attribute_filters;

    bool operator==(const Filters&) const = default;
};

struct NodeSelection {
    std::string node_id;
    bool operator==(const NodeSelection&) const = default;
};

struct EdgeSelection {
    std::string layer_from, node_from, layer_to, node_to;
    bool operator==(const EdgeSelection&) const = default;
};

using Selection = std::variant<NodeSelection, EdgeSelection>;

/// Highlighted elements for a selection; everything else is dimmed.
struct SelectionPayload {
    std::vector<std::size_t> layers;  // layers holding a highlighted state node
    std::vector<std::size_t> state_nodes;
    std::vector<std::size_t> intralayer_edges;
    std::vector<std::size_t> interlayer_edges;
    std::vector<std::size_t> dimmed_state_nodes;
    std::vector<std::size_t> dimmed_edges;
    std::optional<std::size_t> node;  // set for node selections
    int participation = 0;

    bool operator==(const SelectionPayload&) const = default;
};

/// All state nodes of the node and every intralayer and interlayer edge
/// incident to them. Throws unknown-node.
SelectionPayload select_node(const NetworkSnapshot& s, std::string_view node_id);
/// The edge and its two endpoint state nodes. Throws unknown-edge.
SelectionPayload select_edge(const NetworkSnapshot& s, const EdgeSelection& edge);
SelectionPayload select(const NetworkSnapshot& s, const Selection& selection);

/// Element indices (ascending) into snapshot.state_nodes() / edges().
struct FilteredView {
    std::vector<std::size_t> state_nodes;
    std::vector<std::size_t> intralayer_edges;
    std::vector<std::size_t> interlayer_edges;
    std::vector<std::size_t> dimmed_state_nodes;
    std::vector<std::size_t> dimmed_edges;

    bool operator==(const FilteredView&) const = default;
};

/// A state node is visible when its layer is visible, its node_id matches the
/// query and every attribute filter holds. An edge is visible when both
/// endpoints are and its weight reaches the threshold of its class. With a
/// selection, visible elements outside the selection payload are dimmed.
FilteredView apply_filters(const NetworkSnapshot& s, const Filters& filters,
                           const std::optional<Selection>& selection = std::nullopt);

struct LayerComparison {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::size_t> shared_nodes;
    std::vector<std::pair<std::size_t, std::size_t>> shared_edges;  // canonical node pairs
    std::optional<double> jaccard_node;
    std::optional<double> jaccard_edge;
    // Intralayer degree (in + out when directed) on a common bin grid.
    Histogram degree_a;
    Histogram degree_b;
};

LayerComparison compare_layers(const NetworkSnapshot& s, std::size_t a, std::size_t b,
                               std::size_t bins = kDefaultBins);

}  // namespace mln
