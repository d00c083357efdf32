#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mln/error.hpp"
#include "mln/ingest.hpp"
#include "mln/metrics.hpp"
#include "mln/view.hpp"
#include "oracle.hpp"

namespace mlt {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "undefined"; }

bool same(const std::optional<double>& a, double b) {
    if (!a) return std::isnan(b);
    return !std::isnan(b) && close(*a, b);
}

bool is_count(const std::string& metric) { return metric.front() == 'k'; }

}  // namespace

mln::NetworkSnapshot load_json(const std::string& text) {
    auto r = mln::parse_json(text);
    if (!r.ok()) {
        std::string msg;
        for (const auto& e : r.report.errors) msg += e.code + " at " + e.path + ": " + e.message + "; ";
        throw std::runtime_error("fixture did not validate: " + msg);
    }
    return std::move(*r.snapshot);
}

mln::NetworkSnapshot load(const RawNetwork& net) { return load_json(net.to_json()); }

std::vector<std::string> check_metrics_against_oracle(const mln::NetworkSnapshot& s, const RawNetwork& net) {
    std::vector<std::string> bad;
    const auto oracle = brute_force_metrics(net);
    const auto b = mln::compute_bundle(s);
    const auto available = b.state.available();

    // Rows 1-4 per state node.
    std::set<std::string> expected_names;
    for (const auto& [key, metrics] : oracle.state)
        for (const auto& [name, v] : metrics) expected_names.insert(name);
    std::set<std::string> actual_names;
    for (auto m : available) actual_names.insert(std::string(mln::to_string(m)));
    if (!oracle.state.empty() && expected_names != actual_names) bad.push_back("available metric selectors differ");

    for (auto m : available) {
        const auto name = std::string(mln::to_string(m));
        const auto values = b.state.values(m);
        for (std::size_t st = 0; st < s.state_nodes().size(); ++st) {
            const auto& sn = s.state_nodes()[st];
            const StateKey key{s.layers()[sn.layer].id, s.nodes()[sn.node].id};
            const double expected = oracle.state.at(key).at(name);
            const double actual = values(static_cast<Eigen::Index>(st));
            const bool ok = is_count(name) ? expected == actual : close(expected, actual);
            if (!ok)
                bad.push_back(name + "(" + key.second + "," + key.first + ") = " + fmt(actual) + ", oracle " +
                              fmt(expected));
        }
    }

    // Spot-check the by-identifier queries on every state node.
    for (const auto& [key, metrics] : oracle.state) {
        const auto& [layer, node] = key;
        for (const auto& [name, expected] : metrics) {
            const auto m = *mln::metric_from_string(name);
            const bool intra = name.find("intra") != std::string::npos;
            const bool degree = name.front() == 'k';
            const auto dir = name.ends_with("_in")    ? mln::Direction::in
                             : name.ends_with("_out") ? mln::Direction::out
                                                      : mln::Direction::undirected;
            double actual = 0;
            if (intra)
                actual = degree ? mln::intralayer_degree(s, node, layer, dir) : mln::intralayer_strength(s, node, layer, dir);
            else
                actual = degree ? mln::interlayer_degree(s, node, layer, dir) : mln::interlayer_strength(s, node, layer, dir);
            if (!(degree ? actual == expected : close(actual, expected)))
                bad.push_back("query " + name + "(" + node + "," + layer + ") = " + fmt(actual));
            (void)m;
        }
    }

    // Rows 5-7.
    const auto& agg = b.aggregates;
    for (std::size_t v = 0; v < s.node_count(); ++v) {
        const auto iv = static_cast<Eigen::Index>(v);
        const auto& id = s.nodes()[v].id;
        if (agg.participation(iv) != oracle.participation.at(id))
            bad.push_back("P(" + id + ") = " + std::to_string(agg.participation(iv)));
        if (mln::participation(s, id) != oracle.participation.at(id)) bad.push_back("participation query " + id);
        for (std::size_t c = 0; c < agg.metrics.size(); ++c) {
            const auto name = std::string(mln::to_string(agg.metrics[c]));
            const auto ic = static_cast<Eigen::Index>(c);
            const double es = oracle.node_sum.at(id).count(name) ? oracle.node_sum.at(id).at(name) : 0.0;
            if (!close(agg.sum(iv, ic), es)) bad.push_back(name + "_sum(" + id + ") = " + fmt(agg.sum(iv, ic)));
            if (oracle.participation.at(id) > 0) {
                const double em = oracle.node_mean.at(id).at(name);
                if (!close(agg.mean(iv, ic), em))
                    bad.push_back(name + "_mean(" + id + ") = " + fmt(agg.mean(iv, ic)) + ", oracle " + fmt(em));
                if (!close(mln::aggregate_over_layers(s, id, agg.metrics[c], mln::AggregateMode::mean), em))
                    bad.push_back("aggregate query " + name + "_mean(" + id + ")");
            } else if (!std::isnan(agg.mean(iv, ic))) {
                bad.push_back(name + "_mean(" + id + ") should be undefined");
            }
        }
    }

    // Rows 8-12.
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        const auto ia = static_cast<Eigen::Index>(a);
        const auto& id = s.layers()[a].id;
        if (b.layers.node_count(ia) != oracle.node_count.at(id)) bad.push_back("N(" + id + ")");
        if (b.layers.edge_count(ia) != oracle.edge_count.at(id))
            bad.push_back("|E|(" + id + ") = " + std::to_string(b.layers.edge_count(ia)) + ", oracle " +
                          std::to_string(oracle.edge_count.at(id)));
        if (!same(oracle.density.at(id), b.layers.density(ia)))
            bad.push_back("density(" + id + ") = " + fmt(b.layers.density(ia)) + ", oracle " +
                          fmt(oracle.density.at(id)));
        const auto q = mln::layer_density(s, id);
        if (q.has_value() != oracle.density.at(id).has_value() || (q && !close(*q, *oracle.density.at(id))))
            bad.push_back("density query " + id);
    }
    if (!same(oracle.average_density, b.layers.average.value))
        bad.push_back("average density = " + fmt(b.layers.average.value) + ", oracle " + fmt(oracle.average_density));
    if (static_cast<int>(b.layers.average.excluded) != oracle.excluded_layers) bad.push_back("excluded layer count");

    // Rows 13-14.
    for (std::size_t a = 0; a < s.layer_count(); ++a)
        for (std::size_t c = 0; c < s.layer_count(); ++c) {
            const auto ia = static_cast<Eigen::Index>(a), ic = static_cast<Eigen::Index>(c);
            const PairKey key{s.layers()[a].id, s.layers()[c].id};
            if (!same(oracle.jaccard_node.at(key), b.pairwise.jaccard_node(ia, ic)))
                bad.push_back("J_node(" + key.first + "," + key.second + ")");
            if (!same(oracle.jaccard_edge.at(key), b.pairwise.jaccard_edge(ia, ic)))
                bad.push_back("J_edge(" + key.first + "," + key.second + ") = " + fmt(b.pairwise.jaccard_edge(ia, ic)) +
                              ", oracle " + fmt(oracle.jaccard_edge.at(key)));
            const auto qn = mln::jaccard_nodes(s, a, c);
            if (qn.has_value() != oracle.jaccard_node.at(key).has_value()) bad.push_back("jaccard_nodes query");
        }
    for (std::size_t k = 0; k < b.pairwise.set_labels.size(); ++k) {
        const auto& label = b.pairwise.set_labels[k];
        for (std::size_t a = 0; a < s.layer_count(); ++a)
            for (std::size_t c = 0; c < s.layer_count(); ++c) {
                const auto it = oracle.jaccard_by_set.find({label, s.layers()[a].id, s.layers()[c].id});
                const std::optional<double> expected = it == oracle.jaccard_by_set.end() ? std::nullopt : it->second;
                const double actual =
                    b.pairwise.jaccard_node_by_set[k](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
                if (!same(expected, actual))
                    bad.push_back("J_node[" + label + "](" + s.layers()[a].id + "," + s.layers()[c].id + ") = " +
                                  fmt(actual) + ", oracle " + fmt(expected));
            }
    }
    return bad;
}

std::vector<std::string> check_meta_against_oracle(const mln::NetworkSnapshot& s, const RawNetwork& net) {
    std::vector<std::string> bad;
    const std::pair<mln::Aggregation, OracleMode> modes[] = {
        {mln::Aggregation::union_edges, OracleMode::union_edges},
        {mln::Aggregation::sum_occurrence, OracleMode::sum_occurrence},
        {mln::Aggregation::sum_weights, OracleMode::sum_weights}};
    std::vector<std::vector<mln::CanonicalEdgeKey>> key_sets;
    for (const auto& [mode, omode] : modes) {
        const auto meta = mln::build_meta(s, mode);
        const auto oracle = brute_force_meta(net, omode);
        const auto name = std::string(mln::to_string(mode));
        std::vector<mln::CanonicalEdgeKey> keys;
        std::map<PairKey, double> actual;
        for (const auto& e : meta.edges) {
            keys.push_back(e.key);
            actual[{e.key.u, e.key.v}] = e.weight;
            if (e.key.ordered != s.directed()) bad.push_back(name + ": key ordering flag");
        }
        key_sets.push_back(keys);
        if (actual.size() != oracle.edges.size())
            bad.push_back(name + ": " + std::to_string(actual.size()) + " meta-edges, oracle " +
                          std::to_string(oracle.edges.size()));
        for (const auto& [key, w] : oracle.edges) {
            auto it = actual.find(key);
            if (it == actual.end())
                bad.push_back(name + ": missing meta-edge " + key.first + "-" + key.second);
            else if (!close(it->second, w))
                bad.push_back(name + ": w(" + key.first + "," + key.second + ") = " + fmt(it->second) + ", oracle " +
                              fmt(w));
        }
        if (meta.nodes.size() != oracle.nodes.size()) bad.push_back(name + ": meta node count");
        for (std::size_t k = 0; k < meta.nodes.size(); ++k) {
            const auto& id = s.nodes()[meta.nodes[k]].id;
            const auto ik = static_cast<Eigen::Index>(k);
            auto it = oracle.nodes.find(id);
            if (it == oracle.nodes.end()) {
                bad.push_back(name + ": unexpected meta node " + id);
                continue;
            }
            const auto& o = it->second;
            if (s.directed()) {
                if (meta.in_degree(ik) != o.at("k_in") || meta.out_degree(ik) != o.at("k_out") ||
                    !close(meta.in_strength(ik), o.at("s_in")) || !close(meta.out_strength(ik), o.at("s_out")))
                    bad.push_back(name + ": directed k/s of " + id);
                if (mln::meta_degree(s, meta, id, mln::Direction::out) != o.at("k_out"))
                    bad.push_back(name + ": meta_degree query " + id);
            } else {
                if (meta.degree(ik) != o.at("k") || !close(meta.strength(ik), o.at("s")))
                    bad.push_back(name + ": k/s of " + id + " = " + std::to_string(meta.degree(ik)) + "/" +
                                  fmt(meta.strength(ik)) + ", oracle " + fmt(o.at("k")) + "/" + fmt(o.at("s")));
                if (mln::meta_degree(s, meta, id) != o.at("k") || !close(mln::meta_strength(s, meta, id), o.at("s")))
                    bad.push_back(name + ": meta query " + id);
            }
        }
        if (mode == mln::Aggregation::union_edges)
            for (const auto& e : meta.edges)
                if (e.weight != 1.0) bad.push_back("union weight != 1");
        if (mode == mln::Aggregation::sum_occurrence)
            for (const auto& e : meta.edges)
                if (e.weight < 1 || e.weight > static_cast<double>(s.layer_count()) || e.weight != std::floor(e.weight))
                    bad.push_back("sum_occurrence weight out of range");
    }
    if (!(key_sets[0] == key_sets[1] && key_sets[1] == key_sets[2]))
        bad.push_back("meta-edge key sets differ across modes");
    return bad;
}

std::vector<std::string> check_invariants(const mln::NetworkSnapshot& s) {
    std::vector<std::string> bad;
    const auto b = mln::compute_bundle(s);
    const auto L = static_cast<Eigen::Index>(s.layer_count());

    // Handshake per layer.
    for (Eigen::Index a = 0; a < L; ++a) {
        const auto& id = s.layers()[static_cast<std::size_t>(a)].id;
        long long sum = 0, sum_in = 0, sum_out = 0;
        for (auto st : s.layer_state_nodes(static_cast<std::size_t>(a))) {
            const auto i = static_cast<Eigen::Index>(st);
            if (b.state.intra.directed) {
                sum_in += b.state.intra.in_degree(i);
                sum_out += b.state.intra.out_degree(i);
            } else {
                sum += b.state.intra.degree(i);
            }
        }
        const long long E = b.layers.edge_count(a);
        if (b.state.intra.directed ? (sum_in != E || sum_out != E) : sum != 2 * E)
            bad.push_back("handshake fails on layer " + id);
        const double d = b.layers.density(a);
        if (!std::isnan(d) && (d < 0 || d > 1)) bad.push_back("density out of bounds on " + id);
    }

    // Interlayer consistency.
    long long inter_edges = static_cast<long long>(s.interlayer_edges().size());
    if (!b.state.inter.directed) {
        if (b.state.inter.degree.cast<long long>().sum() != 2 * inter_edges) bad.push_back("interlayer handshake");
    } else if (b.state.inter.in_degree.cast<long long>().sum() != inter_edges ||
               b.state.inter.out_degree.cast<long long>().sum() != inter_edges) {
        bad.push_back("directed interlayer handshake");
    }

    // k == 0 implies s == 0; s >= 0.
    for (auto m : b.state.available()) {
        const auto name = std::string(mln::to_string(m));
        if (name.front() != 's') continue;
        auto km = *mln::metric_from_string("k" + name.substr(1));
        const auto sv = b.state.values(m), kv = b.state.values(km);
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) < 0 || (kv(i) == 0 && sv(i) != 0)) bad.push_back("strength/degree consistency for " + name);
    }

    // Weight-1 collapse.
    const bool unit = std::all_of(s.edges().begin(), s.edges().end(), [](const auto& e) { return e.weight == 1.0; });
    if (unit) {
        for (auto m : b.state.available()) {
            const auto name = std::string(mln::to_string(m));
            if (name.front() != 's') continue;
            auto km = *mln::metric_from_string("k" + name.substr(1));
            if (b.state.values(m) != b.state.values(km)) bad.push_back("unit-weight collapse fails for " + name);
            const auto cs = b.aggregates.column(m), ck = b.aggregates.column(km);
            if (b.aggregates.sum.col(cs) != b.aggregates.sum.col(ck)) bad.push_back("unit collapse on aggregates");
        }
        const auto occ = mln::build_meta(s, mln::Aggregation::sum_occurrence);
        const auto sw = mln::build_meta(s, mln::Aggregation::sum_weights);
        if (occ.edges.size() != sw.edges.size()) bad.push_back("unit collapse on meta size");
        for (std::size_t k = 0; k < occ.edges.size() && k < sw.edges.size(); ++k)
            if (occ.edges[k].weight != sw.edges[k].weight) bad.push_back("unit collapse on meta weights");
    }
    const auto uni = mln::build_meta(s, mln::Aggregation::union_edges);
    if (!uni.directed && uni.strength != uni.degree.cast<double>()) bad.push_back("union s_meta != k_meta");

    // Jaccard matrices.
    auto check_matrix = [&](const Eigen::MatrixXd& m, const std::string& name, auto diagonal_defined) {
        for (Eigen::Index a = 0; a < L; ++a)
            for (Eigen::Index c = 0; c < L; ++c) {
                const double x = m(a, c), y = m(c, a);
                if (std::isnan(x) != std::isnan(y) || (!std::isnan(x) && x != y)) bad.push_back(name + " asymmetric");
                if (!std::isnan(x) && (x < 0 || x > 1)) bad.push_back(name + " out of [0,1]");
            }
        for (Eigen::Index a = 0; a < L; ++a) {
            const bool defined = diagonal_defined(a);
            if (defined && m(a, a) != 1.0) bad.push_back(name + " diagonal != 1");
            if (!defined && !std::isnan(m(a, a))) bad.push_back(name + " diagonal should be undefined");
        }
    };
    check_matrix(b.pairwise.jaccard_node, "J_node", [&](Eigen::Index a) { return b.layers.node_count(a) > 0; });
    check_matrix(b.pairwise.jaccard_edge, "J_edge", [&](Eigen::Index a) { return b.layers.edge_count(a) > 0; });
    for (std::size_t k = 0; k < b.pairwise.set_labels.size(); ++k) {
        const auto& label = b.pairwise.set_labels[k];
        check_matrix(b.pairwise.jaccard_node_by_set[k], "J_node[" + label + "]", [&](Eigen::Index a) {
            for (const auto& set : s.bipartite_sets(static_cast<std::size_t>(a)))
                if (set.label == label) return true;
            return false;
        });
    }

    // Presence and multiplexity.
    const Eigen::VectorXi rows = b.distributions.presence.rowwise().sum();
    if (rows != b.aggregates.participation) bad.push_back("presence row sums != participation");
    const auto present = (b.aggregates.participation.array() > 0).count();
    if (b.distributions.histograms.at("multiplexity").total() != static_cast<std::size_t>(present))
        bad.push_back("multiplexity histogram total");
    for (const auto& [name, h] : b.distributions.histograms) {
        if (name.starts_with("k_") || name.starts_with("s_"))
            if (h.total() != s.state_nodes().size()) bad.push_back("histogram total for " + name);
    }
    return bad;
}

std::vector<std::string> check_filter_monotonicity(const mln::NetworkSnapshot& s) {
    std::vector<std::string> bad;
    std::vector<double> thresholds{0.0};
    for (const auto& e : s.edges()) thresholds.push_back(e.weight);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(thresholds.back() + 1.0);

    std::size_t prev_intra = SIZE_MAX, prev_inter = SIZE_MAX;
    for (double t : thresholds) {
        mln::Filters f;
        f.show_interlayer = true;
        f.min_weight_intra = t;
        f.min_weight_inter = t;
        const auto v = mln::apply_filters(s, f);
        if (v.intralayer_edges.size() > prev_intra || v.interlayer_edges.size() > prev_inter)
            bad.push_back("visible edges increased at threshold " + fmt(t));
        prev_intra = v.intralayer_edges.size();
        prev_inter = v.interlayer_edges.size();
        std::size_t expect_intra = 0, expect_inter = 0;
        for (const auto& e : s.edges()) (e.intralayer() ? expect_intra : expect_inter) += e.weight >= t;
        if (v.intralayer_edges.size() != expect_intra || v.interlayer_edges.size() != expect_inter)
            bad.push_back("inclusive threshold count wrong at " + fmt(t));
        std::set<std::size_t> visible(v.state_nodes.begin(), v.state_nodes.end());
        for (auto* list : {&v.intralayer_edges, &v.interlayer_edges})
            for (auto e : *list) {
                const auto& edge = s.edges()[e];
                if (!visible.count(s.state_index(edge.layer_from, edge.node_from)) ||
                    !visible.count(s.state_index(edge.layer_to, edge.node_to)))
                    bad.push_back("visible edge with hidden endpoint");
            }
    }
    return bad;
}

}  // namespace mlt
