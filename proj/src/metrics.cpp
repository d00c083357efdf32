#include "mln/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mln/error.hpp"

namespace mln {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<Metric, std::string_view>, 12> kMetricNames{{
    {Metric::k_intra, "k_intra"},
    {Metric::s_intra, "s_intra"},
    {Metric::k_inter, "k_inter"},
    {Metric::s_inter, "s_inter"},
    {Metric::k_intra_in, "k_intra_in"},
    {Metric::k_intra_out, "k_intra_out"},
    {Metric::s_intra_in, "s_intra_in"},
    {Metric::s_intra_out, "s_intra_out"},
    {Metric::k_inter_in, "k_inter_in"},
    {Metric::k_inter_out, "k_inter_out"},
    {Metric::s_inter_in, "s_inter_in"},
    {Metric::s_inter_out, "s_inter_out"},
}};

struct Selector {
    LinkClass link;
    bool weighted;
    Direction direction;
};

Selector decompose(Metric m) {
    switch (m) {
        case Metric::k_intra: return {LinkClass::intralayer, false, Direction::undirected};
        case Metric::s_intra: return {LinkClass::intralayer, true, Direction::undirected};
        case Metric::k_inter: return {LinkClass::interlayer, false, Direction::undirected};
        case Metric::s_inter: return {LinkClass::interlayer, true, Direction::undirected};
        case Metric::k_intra_in: return {LinkClass::intralayer, false, Direction::in};
        case Metric::k_intra_out: return {LinkClass::intralayer, false, Direction::out};
        case Metric::s_intra_in: return {LinkClass::intralayer, true, Direction::in};
        case Metric::s_intra_out: return {LinkClass::intralayer, true, Direction::out};
        case Metric::k_inter_in: return {LinkClass::interlayer, false, Direction::in};
        case Metric::k_inter_out: return {LinkClass::interlayer, false, Direction::out};
        case Metric::s_inter_in: return {LinkClass::interlayer, true, Direction::in};
        case Metric::s_inter_out: return {LinkClass::interlayer, true, Direction::out};
    }
    return {LinkClass::intralayer, false, Direction::undirected};
}

bool class_directed(const NetworkSnapshot& s, LinkClass c) {
    return c == LinkClass::intralayer ? s.directed() : s.directed_interlayer();
}

void check_direction(const NetworkSnapshot& s, LinkClass c, Direction d) {
    const bool directed = class_directed(s, c);
    if (directed == (d == Direction::undirected))
        throw Error("direction-mismatch",
                    std::string(to_string(c)) + " links are " + (directed ? "directed" : "undirected") +
                        "; '" + std::string(to_string(d)) + "' is not available");
}

// Degree and strength of one state node over one link class. For directed
// classes "out" follows edges leaving the state node and "in" edges entering it.
std::pair<int, double> degree_strength(const NetworkSnapshot& s, std::size_t state, LinkClass c, Direction d) {
    check_direction(s, c, d);
    const auto& sn = s.state_nodes()[state];
    const auto incident = c == LinkClass::intralayer ? s.incident_intralayer(state) : s.incident_interlayer(state);
    int k = 0;
    double w = 0.0;
    for (auto idx : incident) {
        const auto& e = s.edges()[idx];
        const bool is_source = e.layer_from == sn.layer && e.node_from == sn.node;
        const bool is_target = e.layer_to == sn.layer && e.node_to == sn.node;
        const bool counts = d == Direction::undirected || (d == Direction::out && is_source) ||
                            (d == Direction::in && is_target);
        if (counts) {
            ++k;
            w += e.weight;
        }
    }
    return {k, w};
}

std::size_t resolve_state(const NetworkSnapshot& s, std::string_view node, std::string_view layer) {
    return s.state_index(s.layer_index(layer), s.node_index(node));
}

std::vector<Metric> metrics_for(const NetworkSnapshot& s) {
    std::vector<Metric> out;
    if (s.directed())
        out.insert(out.end(), {Metric::k_intra_in, Metric::k_intra_out, Metric::s_intra_in, Metric::s_intra_out});
    else
        out.insert(out.end(), {Metric::k_intra, Metric::s_intra});
    if (s.directed_interlayer())
        out.insert(out.end(), {Metric::k_inter_in, Metric::k_inter_out, Metric::s_inter_in, Metric::s_inter_out});
    else
        out.insert(out.end(), {Metric::k_inter, Metric::s_inter});
    return out;
}

std::size_t intersection_size(const std::vector<std::pair<std::size_t, std::size_t>>& a,
                              const std::vector<std::pair<std::size_t, std::size_t>>& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

const BipartiteSet* find_set(const NetworkSnapshot& s, std::size_t layer, std::string_view label) {
    for (const auto& set : s.bipartite_sets(layer))
        if (set.label == label) return &set;
    return nullptr;
}

std::optional<double> set_jaccard(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    std::vector<std::size_t> common;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
    return ratio(common.size(), x.size() + y.size() - common.size());
}

}  // namespace

std::string_view to_string(Metric m) {
    for (const auto& [metric, name] : kMetricNames)
        if (metric == m) return name;
    return "unknown";
}

std::optional<Metric> metric_from_string(std::string_view name) {
    for (const auto& [metric, n] : kMetricNames)
        if (n == name) return metric;
    return std::nullopt;
}

std::vector<Metric> StateNodeMetrics::available() const {
    std::vector<Metric> out;
    if (intra.directed)
        out.insert(out.end(), {Metric::k_intra_in, Metric::k_intra_out, Metric::s_intra_in, Metric::s_intra_out});
    else
        out.insert(out.end(), {Metric::k_intra, Metric::s_intra});
    if (inter.directed)
        out.insert(out.end(), {Metric::k_inter_in, Metric::k_inter_out, Metric::s_inter_in, Metric::s_inter_out});
    else
        out.insert(out.end(), {Metric::k_inter, Metric::s_inter});
    return out;
}

Eigen::VectorXd StateNodeMetrics::values(Metric m) const {
    const auto sel = decompose(m);
    const auto& cls = sel.link == LinkClass::intralayer ? intra : inter;
    if (cls.directed == (sel.direction == Direction::undirected))
        throw Error("direction-mismatch", "metric " + std::string(to_string(m)) + " is not available");
    switch (sel.direction) {
        case Direction::undirected: return sel.weighted ? cls.strength : cls.degree.cast<double>();
        case Direction::in: return sel.weighted ? cls.in_strength : cls.in_degree.cast<double>();
        case Direction::out: return sel.weighted ? cls.out_strength : cls.out_degree.cast<double>();
    }
    return {};
}

Eigen::Index PhysicalNodeAggregates::column(Metric m) const {
    auto it = std::find(metrics.begin(), metrics.end(), m);
    if (it == metrics.end())
        throw Error("direction-mismatch", "metric " + std::string(to_string(m)) + " is not available");
    return static_cast<Eigen::Index>(it - metrics.begin());
}

int intralayer_degree(const NetworkSnapshot& s, std::string_view node, std::string_view layer, Direction d) {
    return degree_strength(s, resolve_state(s, node, layer), LinkClass::intralayer, d).first;
}

double intralayer_strength(const NetworkSnapshot& s, std::string_view node, std::string_view layer,
                           Direction d) {
    return degree_strength(s, resolve_state(s, node, layer), LinkClass::intralayer, d).second;
}

int interlayer_degree(const NetworkSnapshot& s, std::string_view node, std::string_view layer, Direction d) {
    return degree_strength(s, resolve_state(s, node, layer), LinkClass::interlayer, d).first;
}

double interlayer_strength(const NetworkSnapshot& s, std::string_view node, std::string_view layer,
                           Direction d) {
    return degree_strength(s, resolve_state(s, node, layer), LinkClass::interlayer, d).second;
}

double aggregate_over_layers(const NetworkSnapshot& s, std::string_view node, Metric metric, AggregateMode mode) {
    const auto v = s.node_index(node);
    const auto sel = decompose(metric);
    check_direction(s, sel.link, sel.direction);
    double total = 0.0;
    int present = 0;
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        auto state = s.find_state_node(a, v);
        if (!state) continue;
        ++present;
        auto [k, w] = degree_strength(s, *state, sel.link, sel.direction);
        total += sel.weighted ? w : static_cast<double>(k);
    }
    if (mode == AggregateMode::sum) return total;
    if (present == 0) throw Error("node-absent", "node " + std::string(node) + " appears in no layer");
    return total / present;
}

int participation(const NetworkSnapshot& s, std::string_view node) { return s.participation(s.node_index(node)); }

std::optional<double> layer_density(const NetworkSnapshot& s, std::size_t layer) {
    const double edges = static_cast<double>(s.layer_edges(layer).size());
    const bool directed = s.directed();
    if (s.layers()[layer].bipartite) {
        const auto& sets = s.bipartite_sets(layer);
        if (sets.size() < 2) return std::nullopt;
        const double pairs = static_cast<double>(sets[0].nodes.size()) * static_cast<double>(sets[1].nodes.size());
        return edges / (directed ? 2.0 * pairs : pairs);
    }
    const double n = static_cast<double>(s.layer_size(layer));
    if (n <= 1.0) return std::nullopt;
    const double pairs = n * (n - 1.0);
    return edges / (directed ? pairs : pairs / 2.0);
}

std::optional<double> layer_density(const NetworkSnapshot& s, std::string_view layer) {
    return layer_density(s, s.layer_index(layer));
}

AverageDensity average_density(const NetworkSnapshot& s) {
    AverageDensity out;
    double total = 0.0;
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        if (auto d = layer_density(s, a)) {
            total += *d;
            ++out.included;
        } else {
            ++out.excluded;
        }
    }
    out.value = out.included ? total / static_cast<double>(out.included) : kNaN;
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> layer_edge_keys(const NetworkSnapshot& s, std::size_t layer) {
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    keys.reserve(s.layer_edges(layer).size());
    for (auto e : s.layer_edges(layer)) keys.push_back(s.node_pair_key(s.edges()[e]));
    std::sort(keys.begin(), keys.end());
    return keys;
}

std::optional<double> jaccard_nodes(const NetworkSnapshot& s, std::size_t a, std::size_t b, NodeSubset subset) {
    if (subset == NodeSubset::all) {
        auto x = s.members(a);
        auto y = s.members(b);
        return set_jaccard({x.begin(), x.end()}, {y.begin(), y.end()});
    }
    if (!s.layers()[a].bipartite || !s.layers()[b].bipartite) return std::nullopt;
    const auto& sets_a = s.bipartite_sets(a);
    const std::size_t pick = subset == NodeSubset::set_a ? 0 : 1;
    if (pick >= sets_a.size()) return std::nullopt;
    const auto* other = find_set(s, b, sets_a[pick].label);
    if (!other) return std::nullopt;
    return set_jaccard(sets_a[pick].nodes, other->nodes);
}

std::optional<double> jaccard_edges(const NetworkSnapshot& s, std::size_t a, std::size_t b) {
    const auto x = layer_edge_keys(s, a);
    const auto y = layer_edge_keys(s, b);
    const auto common = intersection_size(x, y);
    return ratio(common, x.size() + y.size() - common);
}

MetricsBundle compute_bundle(const NetworkSnapshot& s, std::size_t bins) {
    MetricsBundle bundle;
    bundle.bins = bins;
    const auto S = static_cast<Eigen::Index>(s.state_nodes().size());
    const auto N = static_cast<Eigen::Index>(s.node_count());
    const auto L = static_cast<Eigen::Index>(s.layer_count());

    // State-node degree and strength in a single pass over the edge list.
    auto init = [S](LinkClassMetrics& m, bool directed) {
        m.directed = directed;
        if (directed) {
            m.in_degree = m.out_degree = Eigen::VectorXi::Zero(S);
            m.in_strength = m.out_strength = Eigen::VectorXd::Zero(S);
        } else {
            m.degree = Eigen::VectorXi::Zero(S);
            m.strength = Eigen::VectorXd::Zero(S);
        }
    };
    init(bundle.state.intra, s.directed());
    init(bundle.state.inter, s.directed_interlayer());

    std::vector<double> intra_weights, inter_weights;
    for (const auto& e : s.edges()) {
        if (e.self_loop()) continue;
        auto& m = e.intralayer() ? bundle.state.intra : bundle.state.inter;
        (e.intralayer() ? intra_weights : inter_weights).push_back(e.weight);
        const auto from = static_cast<Eigen::Index>(s.state_index(e.layer_from, e.node_from));
        const auto to = static_cast<Eigen::Index>(s.state_index(e.layer_to, e.node_to));
        if (m.directed) {
            m.out_degree(from) += 1;
            m.out_strength(from) += e.weight;
            m.in_degree(to) += 1;
            m.in_strength(to) += e.weight;
        } else {
            m.degree(from) += 1;
            m.degree(to) += 1;
            m.strength(from) += e.weight;
            m.strength(to) += e.weight;
        }
    }

    // Per-physical-node aggregates.
    auto& agg = bundle.aggregates;
    agg.metrics = metrics_for(s);
    agg.participation = s.presence().rowwise().sum();
    agg.sum = Eigen::MatrixXd::Zero(N, static_cast<Eigen::Index>(agg.metrics.size()));
    for (std::size_t c = 0; c < agg.metrics.size(); ++c) {
        const auto values = bundle.state.values(agg.metrics[c]);
        for (Eigen::Index st = 0; st < S; ++st)
            agg.sum(static_cast<Eigen::Index>(s.state_nodes()[st].node), static_cast<Eigen::Index>(c)) += values(st);
    }
    agg.mean = agg.sum;
    for (Eigen::Index v = 0; v < N; ++v) {
        if (agg.participation(v) > 0)
            agg.mean.row(v) /= static_cast<double>(agg.participation(v));
        else
            agg.mean.row(v).setConstant(kNaN);
    }

    // Layer level.
    auto& lm = bundle.layers;
    lm.node_count = s.presence().colwise().sum().transpose();
    lm.edge_count.resize(L);
    lm.density.resize(L);
    for (Eigen::Index a = 0; a < L; ++a) {
        lm.edge_count(a) = static_cast<int>(s.layer_edges(static_cast<std::size_t>(a)).size());
        lm.density(a) = layer_density(s, static_cast<std::size_t>(a)).value_or(kNaN);
    }
    lm.average = average_density(s);

    // Pairwise. Shared node counts are the Gram matrix of the presence matrix.
    auto& pw = bundle.pairwise;
    pw.shared_nodes = s.presence().transpose() * s.presence();
    pw.jaccard_node.resize(L, L);
    pw.jaccard_edge.resize(L, L);
    pw.shared_edges.resize(L, L);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> keys(static_cast<std::size_t>(L));
    for (Eigen::Index a = 0; a < L; ++a) keys[static_cast<std::size_t>(a)] = layer_edge_keys(s, static_cast<std::size_t>(a));
    for (Eigen::Index a = 0; a < L; ++a) {
        for (Eigen::Index b = a; b < L; ++b) {
            const auto shared = static_cast<std::size_t>(pw.shared_nodes(a, b));
            const auto uni = static_cast<std::size_t>(lm.node_count(a) + lm.node_count(b)) - shared;
            pw.jaccard_node(a, b) = pw.jaccard_node(b, a) = ratio(shared, uni).value_or(kNaN);

            const auto& ka = keys[static_cast<std::size_t>(a)];
            const auto& kb = keys[static_cast<std::size_t>(b)];
            const auto common = intersection_size(ka, kb);
            pw.shared_edges(a, b) = pw.shared_edges(b, a) = static_cast<int>(common);
            pw.jaccard_edge(a, b) = pw.jaccard_edge(b, a) =
                ratio(common, ka.size() + kb.size() - common).value_or(kNaN);
        }
    }

    std::map<std::string, std::size_t> label_index;
    for (Eigen::Index a = 0; a < L; ++a)
        for (const auto& set : s.bipartite_sets(static_cast<std::size_t>(a))) label_index.emplace(set.label, 0);
    for (auto& [label, idx] : label_index) {
        idx = pw.set_labels.size();
        pw.set_labels.push_back(label);
    }
    for (const auto& label : pw.set_labels) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Constant(L, L, kNaN);
        for (Eigen::Index a = 0; a < L; ++a) {
            const auto* sa = find_set(s, static_cast<std::size_t>(a), label);
            if (!sa) continue;
            for (Eigen::Index b = a; b < L; ++b) {
                const auto* sb = find_set(s, static_cast<std::size_t>(b), label);
                if (!sb) continue;
                j(a, b) = j(b, a) = set_jaccard(sa->nodes, sb->nodes).value_or(kNaN);
            }
        }
        pw.jaccard_node_by_set.push_back(std::move(j));
    }

    // Distributions by linear binning of the scalars above.
    auto& dist = bundle.distributions;
    dist.presence = s.presence();
    for (auto m : bundle.state.available()) {
        const Eigen::VectorXd v = bundle.state.values(m);
        dist.histograms.emplace(std::string(to_string(m)), histogram({v.data(), static_cast<std::size_t>(v.size())}, bins));
    }
    dist.histograms.emplace("weight_intra", histogram(intra_weights, bins));
    dist.histograms.emplace("weight_inter", histogram(inter_weights, bins));
    std::vector<double> multiplexity;
    for (Eigen::Index v = 0; v < N; ++v)
        if (agg.participation(v) > 0) multiplexity.push_back(agg.participation(v));
    dist.histograms.emplace("multiplexity", histogram(multiplexity, bins));
    return bundle;
}

}  // namespace mln
