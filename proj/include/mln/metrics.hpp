#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mln/histogram.hpp"
#include "mln/model.hpp"

namespace mln {

/// Per-state-node quantities. The undirected selectors exist only when their
/// link class is undirected; the in/out selectors only when it is directed.
enum class Metric {
    k_intra,
    s_intra,
    k_inter,
    s_inter,
    k_intra_in,
    k_intra_out,
    s_intra_in,
    s_intra_out,
    k_inter_in,
    k_inter_out,
    s_inter_in,
    s_inter_out,
};
std::string_view to_string(Metric m);
std::optional<Metric> metric_from_string(std::string_view name);

enum class AggregateMode { sum, mean };
enum class NodeSubset { all, set_a, set_b };

struct LinkClassMetrics {
    bool directed = false;
    // Indexed by state node. Unused variants are left empty.
    Eigen::VectorXi degree, in_degree, out_degree;
    Eigen::VectorXd strength, in_strength, out_strength;
};

struct StateNodeMetrics {
    LinkClassMetrics intra;
    LinkClassMetrics inter;

    std::vector<Metric> available() const;
    /// Values for every state node; throws direction-mismatch when the
    /// selector does not exist for this network.
    Eigen::VectorXd values(Metric m) const;
};

struct PhysicalNodeAggregates {
    std::vector<Metric> metrics;    // column order of sum/mean
    Eigen::MatrixXd sum;            // nodes x metrics
    Eigen::MatrixXd mean;           // NaN where the node is in no layer
    Eigen::VectorXi participation;  // P(v)

    Eigen::Index column(Metric m) const;
};

struct AverageDensity {
    double value = 0.0;  // NaN when no layer has a defined density
    std::size_t included = 0;
    std::size_t excluded = 0;
};

struct LayerMetrics {
    Eigen::VectorXi node_count;
    Eigen::VectorXi edge_count;
    Eigen::VectorXd density;  // NaN where undefined
    AverageDensity average;
};

struct PairwiseLayerMetrics {
    Eigen::MatrixXi shared_nodes;
    Eigen::MatrixXi shared_edges;
    Eigen::MatrixXd jaccard_node;  // NaN where undefined
    Eigen::MatrixXd jaccard_edge;
    // Per node-set Jaccard for bipartite layers, one matrix per node_type label.
    std::vector<std::string> set_labels;
    std::vector<Eigen::MatrixXd> jaccard_node_by_set;
};

struct Distributions {
    std::map<std::string, Histogram> histograms;
    Eigen::MatrixXi presence;  // nodes x layers
};

struct MetricsBundle {
    std::size_t bins = kDefaultBins;
    StateNodeMetrics state;
    PhysicalNodeAggregates aggregates;
    LayerMetrics layers;
    PairwiseLayerMetrics pairwise;
    Distributions distributions;
};

// Single-quantity queries by identifier. They throw mln::Error with codes
// unknown-layer, unknown-node, unknown-state-node or direction-mismatch.
int intralayer_degree(const NetworkSnapshot& s, std::string_view node, std::string_view layer,
                      Direction direction = Direction::undirected);
double intralayer_strength(const NetworkSnapshot& s, std::string_view node, std::string_view layer,
                           Direction direction = Direction::undirected);
int interlayer_degree(const NetworkSnapshot& s, std::string_view node, std::string_view layer,
                      Direction direction = Direction::undirected);
double interlayer_strength(const NetworkSnapshot& s, std::string_view node, std::string_view layer,
                           Direction direction = Direction::undirected);

/// Sum or mean of a state-node metric over the layers the node appears in.
double aggregate_over_layers(const NetworkSnapshot& s, std::string_view node, Metric metric,
                             AggregateMode mode);
int participation(const NetworkSnapshot& s, std::string_view node);

/// |E| over the possible pairs for the layer's (bipartite, directed) case;
/// nullopt when the denominator is zero.
std::optional<double> layer_density(const NetworkSnapshot& s, std::size_t layer);
std::optional<double> layer_density(const NetworkSnapshot& s, std::string_view layer);
/// Mean over layers with a defined density; the rest are counted as excluded.
AverageDensity average_density(const NetworkSnapshot& s);

/// Node-identity Jaccard. set_a / set_b select the first / second node_type
/// label of layer a (sorted), matched in layer b by label; undefined when
/// either layer is not bipartite or lacks the label, or the union is empty.
std::optional<double> jaccard_nodes(const NetworkSnapshot& s, std::size_t a, std::size_t b,
                                    NodeSubset subset = NodeSubset::all);
/// Edge-identity Jaccard on canonical intralayer keys; weights ignored.
std::optional<double> jaccard_edges(const NetworkSnapshot& s, std::size_t a, std::size_t b);

/// Canonical intralayer edge keys of a layer, sorted. Self-loops excluded.
std::vector<std::pair<std::size_t, std::size_t>> layer_edge_keys(const NetworkSnapshot& s, std::size_t layer);

MetricsBundle compute_bundle(const NetworkSnapshot& s, std::size_t bins = kDefaultBins);

}  // namespace mln
