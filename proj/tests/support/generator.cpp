#include "generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace mlt {

std::string RawNetwork::to_json() const {
    nlohmann::ordered_json j;
    j["directed"] = directed;
    j["directed_interlayer"] = directed_interlayer;
    auto& ls = j["layers"] = nlohmann::ordered_json::array();
    for (const auto& l : layers) {
        nlohmann::ordered_json o{{"layer_id", l.id}, {"bipartite", l.bipartite}};
        if (l.latitude) o["latitude"] = *l.latitude;
        if (l.longitude) o["longitude"] = *l.longitude;
        ls.push_back(o);
    }
    auto& ns = j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : nodes) {
        nlohmann::ordered_json o{{"node_id", n.id}};
        if (n.node_type) o["node_type"] = *n.node_type;
        ns.push_back(o);
    }
    auto& ss = j["state_nodes"] = nlohmann::ordered_json::array();
    for (const auto& s : states) ss.push_back({{"layer_id", s.layer}, {"node_id", s.node}});
    auto& es = j["extended"] = nlohmann::ordered_json::array();
    for (const auto& e : edges) {
        nlohmann::ordered_json o{{"layer_from", e.layer_from},
                                 {"node_from", e.node_from},
                                 {"layer_to", e.layer_to},
                                 {"node_to", e.node_to}};
        if (e.weight) o["weight"] = *e.weight;
        es.push_back(o);
    }
    return j.dump();
}

std::string RawNetwork::edges_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "layer_from,node_from,layer_to,node_to,weight\n";
    for (const auto& e : edges)
        out << e.layer_from << ',' << e.node_from << ',' << e.layer_to << ',' << e.node_to << ',' << e.w() << '\n';
    return out.str();
}

RawNetwork RawNetwork::reversed_undirected() const {
    RawNetwork r = *this;
    for (auto& e : r.edges) {
        const bool dir = e.intralayer() ? directed : directed_interlayer;
        if (dir) continue;
        std::swap(e.layer_from, e.layer_to);
        std::swap(e.node_from, e.node_to);
    }
    return r;
}

GenOptions combination(int index) {
    GenOptions o;
    o.directed = index & 1;
    o.bipartite = index & 2;
    o.weighted = index & 4;
    return o;
}

RawNetwork random_network(std::mt19937_64& rng, const GenOptions& opt) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto chance = [&](double p) { return unit(rng) < p; };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto weight = [&]() -> std::optional<double> {
        if (!opt.weighted) return std::nullopt;
        return std::round(unit(rng) * 5000.0 + 1.0) / 1000.0;
    };

    RawNetwork net;
    net.directed = opt.directed;
    net.directed_interlayer = opt.directed || chance(0.5);
    const int L = pick(opt.min_layers, opt.max_layers);
    const int N = pick(opt.min_nodes, opt.max_nodes);
    for (int a = 0; a < L; ++a) {
        RawLayer l;
        l.id = "L" + std::to_string(a);
        l.bipartite = opt.bipartite && chance(0.75);
        net.layers.push_back(l);
    }
    for (int i = 0; i < N; ++i) {
        RawNode n;
        n.id = "n" + std::to_string(i);
        if (opt.bipartite) n.node_type = chance(0.5) ? "plant" : "pollinator";
        net.nodes.push_back(n);
    }

    std::vector<std::vector<int>> members(L);
    for (int a = 0; a < L; ++a) {
        for (int i = 0; i < N; ++i)
            if (chance(opt.presence)) members[a].push_back(i);
        if (members[a].empty()) members[a].push_back(pick(0, N - 1));
        for (int i : members[a]) net.states.push_back({net.layers[a].id, net.nodes[i].id});
    }
    std::shuffle(net.states.begin(), net.states.end(), rng);

    auto add = [&](int a, int i, int b, int j, bool directed_class) {
        RawEdge e{net.layers[a].id, net.nodes[i].id, net.layers[b].id, net.nodes[j].id, weight()};
        if (!directed_class && chance(0.5)) {
            std::swap(e.layer_from, e.layer_to);
            std::swap(e.node_from, e.node_to);
        }
        net.edges.push_back(e);
    };

    for (int a = 0; a < L; ++a) {
        const bool bip = net.layers[a].bipartite;
        for (int i : members[a]) {
            for (int j : members[a]) {
                if (i == j) {
                    if (chance(opt.self_loop_p)) add(a, i, a, i, true);
                    continue;
                }
                if (!opt.directed && j < i) continue;
                double p = opt.intra_p;
                if (bip && net.nodes[i].node_type == net.nodes[j].node_type) p *= 0.1;
                if (chance(p)) add(a, i, a, j, opt.directed);
            }
        }
    }
    for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
            if (a == b || (!net.directed_interlayer && b < a)) continue;
            for (int i : members[a])
                for (int j : members[b]) {
                    const double p = i == j ? opt.replica_p : opt.general_p;
                    if (chance(p)) add(a, i, b, j, net.directed_interlayer);
                }
        }
    }
    std::shuffle(net.edges.begin(), net.edges.end(), rng);
    return net;
}

RawNetwork simple(const std::vector<RawState>& states, const std::vector<RawEdge>& edges, bool directed,
                  bool directed_interlayer) {
    RawNetwork net;
    net.directed = directed;
    net.directed_interlayer = directed_interlayer || directed;
    std::set<std::string> seen_layers, seen_nodes;
    for (const auto& s : states) {
        if (seen_layers.insert(s.layer).second) net.layers.push_back({s.layer, false, std::nullopt, std::nullopt});
        if (seen_nodes.insert(s.node).second) net.nodes.push_back({s.node, std::nullopt});
    }
    net.states = states;
    net.edges = edges;
    return net;
}

RawNetwork stress_network(std::uint64_t seed, int L, int N, int intralayer, int interlayer) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RawNetwork net;
    for (int a = 0; a < L; ++a) net.layers.push_back({"layer" + std::to_string(a), false, std::nullopt, std::nullopt});
    for (int i = 0; i < N; ++i) net.nodes.push_back({"node" + std::to_string(i), std::nullopt});
    for (int a = 0; a < L; ++a)
        for (int i = 0; i < N; ++i) net.states.push_back({net.layers[a].id, net.nodes[i].id});

    auto w = [&] { return std::optional<double>(std::round(unit(rng) * 1000.0 + 1.0) / 100.0); };
    std::set<std::tuple<int, int, int>> intra;
    std::uniform_int_distribution<int> layer(0, L - 1), node(0, N - 1);
    while (static_cast<int>(intra.size()) < intralayer) {
        int a = layer(rng), i = node(rng), j = node(rng);
        if (i == j) continue;
        if (j < i) std::swap(i, j);
        if (intra.emplace(a, i, j).second)
            net.edges.push_back({net.layers[a].id, net.nodes[i].id, net.layers[a].id, net.nodes[j].id, w()});
    }
    std::set<std::tuple<int, int, int, int>> inter;
    while (static_cast<int>(inter.size()) < interlayer) {
        int a = layer(rng), b = layer(rng), i = node(rng), j = node(rng);
        if (a == b) continue;
        if (b < a) {
            std::swap(a, b);
            std::swap(i, j);
        }
        if (inter.emplace(a, i, b, j).second)
            net.edges.push_back({net.layers[a].id, net.nodes[i].id, net.layers[b].id, net.nodes[j].id, w()});
    }
    return net;
}

}  // namespace mlt
