#include "mln/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "mln/error.hpp"

namespace mln {

EdgeClass classify_edge(std::string_view layer_from, std::string_view node_from,
                        std::string_view layer_to, std::string_view node_to) {
    if (layer_from == layer_to) return {LinkClass::intralayer, Coupling::none};
    return {LinkClass::interlayer, node_from == node_to ? Coupling::replica : Coupling::general};
}

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error("invalid-snapshot", message); }

struct TripleHash {
    std::size_t operator()(const std::tuple<std::size_t, std::size_t, std::size_t>& t) const {
        auto [a, b, c] = t;
        std::size_t h = a * 0x9E3779B97F4A7C15ULL;
        h ^= b + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h ^= c + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

NetworkSnapshot::NetworkSnapshot(std::vector<LayerDef> layers, std::vector<PhysicalNode> nodes,
                                 std::vector<StateNode> state_nodes,
                                 std::vector<ExtendedEdge> edges, DirectednessFlags flags)
    : layers_(std::move(layers)),
      nodes_(std::move(nodes)),
      state_nodes_(std::move(state_nodes)),
      edges_(std::move(edges)),
      flags_(flags) {
    if (layers_.empty()) invalid("a network needs at least one layer");
    if (flags_.directed) flags_.directed_interlayer = true;

    const std::size_t L = layers_.size();
    const std::size_t N = nodes_.size();
    const std::size_t S = state_nodes_.size();

    for (std::size_t a = 0; a < L; ++a) {
        auto& layer = layers_[a];
        if (!layer_ids_.emplace(layer.id, a).second) invalid("duplicate layer id " + layer.id);
        if (layer.latitude.has_value() != layer.longitude.has_value())
            invalid("layer " + layer.id + " has only one of latitude/longitude");
        if (layer.display_name.empty()) layer.display_name = layer.id;
    }
    for (std::size_t v = 0; v < N; ++v)
        if (!node_ids_.emplace(nodes_[v].id, v).second) invalid("duplicate node id " + nodes_[v].id);

    presence_ = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(L));
    members_.assign(L, {});
    layer_states_.assign(L, {});
    for (std::size_t s = 0; s < S; ++s) {
        const auto& sn = state_nodes_[s];
        if (sn.layer >= L || sn.node >= N) invalid("state node references a missing layer or node");
        if (!state_ids_.emplace(state_key(sn.layer, sn.node), s).second)
            invalid("duplicate state node (" + layers_[sn.layer].id + ", " + nodes_[sn.node].id + ")");
        presence_(static_cast<Eigen::Index>(sn.node), static_cast<Eigen::Index>(sn.layer)) = 1;
        members_[sn.layer].push_back(sn.node);
        layer_states_[sn.layer].push_back(s);
    }
    for (auto& m : members_) std::sort(m.begin(), m.end());

    layer_edges_.assign(L, {});
    layer_loops_.assign(L, {});
    inc_intra_.assign(S, {});
    inc_inter_.assign(S, {});
    std::unordered_set<std::tuple<std::size_t, std::size_t, std::size_t>, TripleHash> intra_keys;
    std::unordered_set<std::uint64_t> inter_keys;

    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& edge = edges_[e];
        const auto from = find_state_node(edge.layer_from, edge.node_from);
        const auto to = find_state_node(edge.layer_to, edge.node_to);
        if (!from || !to) invalid("edge endpoint is not a state node");
        if (!std::isfinite(edge.weight) || edge.weight <= 0.0) invalid("edge weight must be positive");
        edge.kind = classify_edge(layers_[edge.layer_from].id, nodes_[edge.node_from].id,
                                  layers_[edge.layer_to].id, nodes_[edge.node_to].id);
        const bool directed = edge_directed(edge);

        if (edge.intralayer()) {
            auto [u, v] = node_pair_key(edge);
            if (!intra_keys.emplace(edge.layer_from, u, v).second)
                invalid("duplicate intralayer edge (" + nodes_[u].id + ", " + nodes_[v].id + ") in layer " +
                        layers_[edge.layer_from].id);
            if (edge.self_loop()) {
                layer_loops_[edge.layer_from].push_back(e);
            } else {
                layer_edges_[edge.layer_from].push_back(e);
                inc_intra_[*from].push_back(e);
                inc_intra_[*to].push_back(e);
            }
        } else {
            std::size_t a = *from, b = *to;
            if (!directed && b < a) std::swap(a, b);
            if (!inter_keys.insert(pair_key(a, b)).second)
                invalid("duplicate interlayer edge between (" + layers_[edge.layer_from].id + ", " +
                        nodes_[edge.node_from].id + ") and (" + layers_[edge.layer_to].id + ", " +
                        nodes_[edge.node_to].id + ")");
            interlayer_.push_back(e);
            inc_inter_[*from].push_back(e);
            inc_inter_[*to].push_back(e);
        }
        adjacency_[pair_key(*from, *to)] = edge.weight;
        if (!directed) adjacency_[pair_key(*to, *from)] = edge.weight;
    }

    bipartite_.assign(L, {});
    for (std::size_t a = 0; a < L; ++a) {
        if (!layers_[a].bipartite) continue;
        std::map<std::string, std::vector<std::size_t>> sets;
        for (auto v : members_[a]) {
            const auto& type = nodes_[v].node_type;
            if (!type || type->empty())
                invalid("node " + nodes_[v].id + " in bipartite layer " + layers_[a].id + " has no node_type");
            sets[*type].push_back(v);
        }
        if (sets.size() > 2) invalid("bipartite layer " + layers_[a].id + " has more than two node types");
        for (auto& [label, members] : sets) bipartite_[a].push_back({label, std::move(members)});
    }
}

std::optional<std::size_t> NetworkSnapshot::find_layer(std::string_view id) const {
    auto it = layer_ids_.find(std::string(id));
    if (it == layer_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> NetworkSnapshot::find_node(std::string_view id) const {
    auto it = node_ids_.find(std::string(id));
    if (it == node_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> NetworkSnapshot::find_state_node(std::size_t layer, std::size_t node) const {
    if (layer >= layers_.size() || node >= nodes_.size()) return std::nullopt;
    auto it = state_ids_.find(state_key(layer, node));
    if (it == state_ids_.end()) return std::nullopt;
    return it->second;
}

std::size_t NetworkSnapshot::layer_index(std::string_view id) const {
    if (auto a = find_layer(id)) return *a;
    throw Error("unknown-layer", "unknown layer " + std::string(id));
}

std::size_t NetworkSnapshot::node_index(std::string_view id) const {
    if (auto v = find_node(id)) return *v;
    throw Error("unknown-node", "unknown node " + std::string(id));
}

std::size_t NetworkSnapshot::state_index(std::size_t layer, std::size_t node) const {
    if (auto s = find_state_node(layer, node)) return *s;
    std::string what = "(" + (layer < layers_.size() ? layers_[layer].id : std::to_string(layer)) + ", " +
                       (node < nodes_.size() ? nodes_[node].id : std::to_string(node)) + ")";
    throw Error("unknown-state-node", "no state node " + what);
}

std::pair<std::size_t, std::size_t> NetworkSnapshot::node_pair_key(const ExtendedEdge& e) const {
    std::size_t u = e.node_from, v = e.node_to;
    if (!edge_directed(e) && v < u) std::swap(u, v);
    return {u, v};
}

double NetworkSnapshot::adjacency_weight(std::size_t layer_a, std::size_t node_i, std::size_t layer_b,
                                         std::size_t node_j) const {
    const auto from = state_index(layer_a, node_i);
    const auto to = state_index(layer_b, node_j);
    auto it = adjacency_.find(pair_key(from, to));
    return it == adjacency_.end() ? 0.0 : it->second;
}

double NetworkSnapshot::adjacency_weight(std::string_view layer_a, std::string_view node_i,
                                         std::string_view layer_b, std::string_view node_j) const {
    auto resolve = [this](std::string_view layer, std::string_view node) {
        auto a = find_layer(layer);
        auto v = find_node(node);
        if (!a || !v || !find_state_node(*a, *v))
            throw Error("unknown-state-node",
                        "no state node (" + std::string(layer) + ", " + std::string(node) + ")");
        return std::pair{*a, *v};
    };
    auto [a, i] = resolve(layer_a, node_i);
    auto [b, j] = resolve(layer_b, node_j);
    return adjacency_weight(a, i, b, j);
}

std::string_view to_string(LinkClass c) {
    return c == LinkClass::intralayer ? "intralayer" : "interlayer";
}

std::string_view to_string(Coupling c) {
    switch (c) {
        case Coupling::replica: return "replica";
        case Coupling::general: return "general";
        default: return "none";
    }
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::in: return "in";
        case Direction::out: return "out";
        default: return "undirected";
    }
}

}  // namespace mln
