#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mln/model.hpp"

namespace mln {

enum class Aggregation { union_edges, sum_occurrence, sum_weights };
std::string_view to_string(Aggregation a);
/// Accepts the long names and the CLI short forms union, count, sum.
std::optional<Aggregation> aggregation_from_string(std::string_view name);

/// Deduplication key for an intralayer edge: directed edges keep (u, v),
/// undirected edges store the lexicographically sorted pair.
struct CanonicalEdgeKey {
    std::string u;
    std::string v;
    bool ordered = false;

    auto operator<=>(const CanonicalEdgeKey&) const = default;
    bool operator==(const CanonicalEdgeKey&) const = default;
    bool self_loop() const { return u == v; }
};

CanonicalEdgeKey canonicalize(std::string_view from, std::string_view to, bool directed);

struct LayerContribution {
    std::size_t layer;
    double weight;
    bool operator==(const LayerContribution&) const = default;
};

struct MetaEdge {
    CanonicalEdgeKey key;
    double weight = 0.0;
    std::vector<LayerContribution> layers;  // provenance, in layer order
    bool operator==(const MetaEdge&) const = default;
};

/// Layer-aggregated projection of the intralayer links.
struct MetaNetwork {
    Aggregation mode = Aggregation::union_edges;
    bool directed = false;
    std::vector<std::size_t> nodes;  // physical nodes with P >= 1, in node order
    std::vector<MetaEdge> edges;     // sorted by key
    // Parallel to nodes; self-loop meta-edges do not contribute.
    Eigen::VectorXi degree, in_degree, out_degree;
    Eigen::VectorXd strength, in_strength, out_strength;

    const MetaEdge* find(const CanonicalEdgeKey& key) const;
    std::optional<std::size_t> position(std::size_t node) const;
};

MetaNetwork build_meta(const NetworkSnapshot& s, Aggregation mode);

/// Distinct neighbours in the projection (in/out for directed projections).
/// Throws unknown-node, or direction-mismatch.
int meta_degree(const NetworkSnapshot& s, const MetaNetwork& meta, std::string_view node,
                Direction direction = Direction::undirected);
double meta_strength(const NetworkSnapshot& s, const MetaNetwork& meta, std::string_view node,
                     Direction direction = Direction::undirected);

}  // namespace mln
