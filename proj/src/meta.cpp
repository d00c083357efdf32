#include "mln/meta.hpp"

#include <algorithm>
#include <map>

#include "mln/error.hpp"

namespace mln {

std::string_view to_string(Aggregation a) {
    switch (a) {
        case Aggregation::sum_occurrence: return "sum_occurrence";
        case Aggregation::sum_weights: return "sum_weights";
        default: return "union";
    }
}

std::optional<Aggregation> aggregation_from_string(std::string_view name) {
    if (name == "union" || name == "union_edges") return Aggregation::union_edges;
    if (name == "count" || name == "sum_occurrence") return Aggregation::sum_occurrence;
    if (name == "sum" || name == "sum_weights") return Aggregation::sum_weights;
    return std::nullopt;
}

CanonicalEdgeKey canonicalize(std::string_view from, std::string_view to, bool directed) {
    if (!directed && to < from) std::swap(from, to);
    return {std::string(from), std::string(to), directed};
}

const MetaEdge* MetaNetwork::find(const CanonicalEdgeKey& key) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), key,
                               [](const MetaEdge& e, const CanonicalEdgeKey& k) { return e.key < k; });
    if (it == edges.end() || it->key != key) return nullptr;
    return &*it;
}

std::optional<std::size_t> MetaNetwork::position(std::size_t node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
}

MetaNetwork build_meta(const NetworkSnapshot& s, Aggregation mode) {
    MetaNetwork meta;
    meta.mode = mode;
    meta.directed = s.directed();
    for (std::size_t v = 0; v < s.node_count(); ++v)
        if (s.participation(v) > 0) meta.nodes.push_back(v);

    std::map<CanonicalEdgeKey, MetaEdge> acc;
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        auto add = [&](std::size_t idx) {
            const auto& e = s.edges()[idx];
            auto key = canonicalize(s.nodes()[e.node_from].id, s.nodes()[e.node_to].id, meta.directed);
            auto& me = acc[key];
            me.key = std::move(key);
            me.layers.push_back({a, e.weight});
        };
        for (auto idx : s.layer_edges(a)) add(idx);
        for (auto idx : s.layer_self_loops(a)) add(idx);
    }

    meta.edges.reserve(acc.size());
    for (auto& [key, me] : acc) {
        switch (mode) {
            case Aggregation::union_edges: me.weight = 1.0; break;
            case Aggregation::sum_occurrence: me.weight = static_cast<double>(me.layers.size()); break;
            case Aggregation::sum_weights:
                me.weight = 0.0;
                for (const auto& c : me.layers) me.weight += c.weight;
                break;
        }
        meta.edges.push_back(std::move(me));
    }

    const auto n = static_cast<Eigen::Index>(meta.nodes.size());
    if (meta.directed) {
        meta.in_degree = meta.out_degree = Eigen::VectorXi::Zero(n);
        meta.in_strength = meta.out_strength = Eigen::VectorXd::Zero(n);
    } else {
        meta.degree = Eigen::VectorXi::Zero(n);
        meta.strength = Eigen::VectorXd::Zero(n);
    }
    for (const auto& me : meta.edges) {
        if (me.key.self_loop()) continue;
        const auto u = static_cast<Eigen::Index>(*meta.position(s.node_index(me.key.u)));
        const auto v = static_cast<Eigen::Index>(*meta.position(s.node_index(me.key.v)));
        if (meta.directed) {
            meta.out_degree(u) += 1;
            meta.out_strength(u) += me.weight;
            meta.in_degree(v) += 1;
            meta.in_strength(v) += me.weight;
        } else {
            meta.degree(u) += 1;
            meta.degree(v) += 1;
            meta.strength(u) += me.weight;
            meta.strength(v) += me.weight;
        }
    }
    return meta;
}

namespace {

Eigen::Index meta_position(const NetworkSnapshot& s, const MetaNetwork& meta, std::string_view node,
                           Direction d) {
    if (meta.directed == (d == Direction::undirected))
        throw Error("direction-mismatch", std::string("the projection is ") +
                                              (meta.directed ? "directed" : "undirected"));
    auto pos = meta.position(s.node_index(node));
    if (!pos) throw Error("unknown-node", "node " + std::string(node) + " is not in the projection");
    return static_cast<Eigen::Index>(*pos);
}

}  // namespace

int meta_degree(const NetworkSnapshot& s, const MetaNetwork& meta, std::string_view node, Direction d) {
    const auto p = meta_position(s, meta, node, d);
    switch (d) {
        case Direction::in: return meta.in_degree(p);
        case Direction::out: return meta.out_degree(p);
        default: return meta.degree(p);
    }
}

double meta_strength(const NetworkSnapshot& s, const MetaNetwork& meta, std::string_view node, Direction d) {
    const auto p = meta_position(s, meta, node, d);
    switch (d) {
        case Direction::in: return meta.in_strength(p);
        case Direction::out: return meta.out_strength(p);
        default: return meta.strength(p);
    }
}

}  // namespace mln
