#include "mln/view.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

#include "mln/error.hpp"
#include "mln/metrics.hpp"

namespace mln {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 7> kModes{{
    {Mode::network, "network"},
    {Mode::map, "map"},
    {Mode::layer_view, "layer_view"},
    {Mode::grid, "grid"},
    {Mode::meta_network, "meta_network"},
    {Mode::dashboard, "dashboard"},
    {Mode::data, "data"},
}};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

template <typename T>
bool compare(const T& lhs, AttributeFilter::Op op, const T& rhs) {
    switch (op) {
        case AttributeFilter::Op::eq: return lhs == rhs;
        case AttributeFilter::Op::ne: return !(lhs == rhs);
        case AttributeFilter::Op::lt: return lhs < rhs;
        case AttributeFilter::Op::le: return lhs <= rhs;
        case AttributeFilter::Op::gt: return lhs > rhs;
        case AttributeFilter::Op::ge: return lhs >= rhs;
        case AttributeFilter::Op::contains: return false;
    }
    return false;
}

bool matches(const Attributes& attrs, const AttributeFilter& f) {
    auto it = attrs.find(f.key);
    if (it == attrs.end()) return false;
    const auto& v = it->second;
    if (f.op == AttributeFilter::Op::contains) {
        auto* text = std::get_if<std::string>(&v);
        auto* needle = std::get_if<std::string>(&f.value);
        return text && needle && lower(*text).find(lower(*needle)) != std::string::npos;
    }
    if (v.index() != f.value.index()) return f.op == AttributeFilter::Op::ne;
    return std::visit(
        [&](const auto& lhs) {
            using T = std::decay_t<decltype(lhs)>;
            return compare(lhs, f.op, std::get<T>(f.value));
        },
        v);
}

bool state_visible(const NetworkSnapshot& s, const StateNode& sn, const Filters& f, const std::string& query) {
    const auto& layer = s.layers()[sn.layer];
    const auto& node = s.nodes()[sn.node];
    if (f.visible_layers && !f.visible_layers->count(layer.id)) return false;
    if (!query.empty() && lower(node.id).find(query) == std::string::npos) return false;
    for (const auto& af : f.attribute_filters) {
        const Attributes& attrs = af.scope == AttributeFilter::Scope::node         ? node.attributes
                                  : af.scope == AttributeFilter::Scope::state_node ? sn.attributes
                                                                                   : layer.attributes;
        if (!matches(attrs, af)) return false;
    }
    return true;
}

void finish_payload(const NetworkSnapshot& s, SelectionPayload& p) {
    for (auto* v : {&p.layers, &p.state_nodes, &p.intralayer_edges, &p.interlayer_edges}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    for (std::size_t st = 0; st < s.state_nodes().size(); ++st)
        if (!std::binary_search(p.state_nodes.begin(), p.state_nodes.end(), st)) p.dimmed_state_nodes.push_back(st);
    for (std::size_t e = 0; e < s.edges().size(); ++e) {
        const auto& list = s.edges()[e].intralayer() ? p.intralayer_edges : p.interlayer_edges;
        if (!std::binary_search(list.begin(), list.end(), e)) p.dimmed_edges.push_back(e);
    }
}

}  // namespace

std::string_view to_string(Mode m) {
    for (const auto& [mode, name] : kModes)
        if (mode == m) return name;
    return "network";
}

std::optional<Mode> mode_from_string(std::string_view name) {
    for (const auto& [mode, n] : kModes)
        if (n == name) return mode;
    return std::nullopt;
}

SelectionPayload select_node(const NetworkSnapshot& s, std::string_view node_id) {
    const auto v = s.node_index(node_id);
    SelectionPayload p;
    p.node = v;
    p.participation = s.participation(v);
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        auto st = s.find_state_node(a, v);
        if (!st) continue;
        p.layers.push_back(a);
        p.state_nodes.push_back(*st);
        for (auto e : s.incident_intralayer(*st)) p.intralayer_edges.push_back(e);
        for (auto e : s.layer_self_loops(a))
            if (s.edges()[e].node_from == v) p.intralayer_edges.push_back(e);
        for (auto e : s.incident_interlayer(*st)) p.interlayer_edges.push_back(e);
    }
    finish_payload(s, p);
    return p;
}

SelectionPayload select_edge(const NetworkSnapshot& s, const EdgeSelection& sel) {
    const auto lf = s.find_layer(sel.layer_from), lt = s.find_layer(sel.layer_to);
    const auto nf = s.find_node(sel.node_from), nt = s.find_node(sel.node_to);
    std::optional<std::size_t> found;
    if (lf && lt && nf && nt) {
        for (std::size_t e = 0; e < s.edges().size() && !found; ++e) {
            const auto& edge = s.edges()[e];
            const bool forward = edge.layer_from == *lf && edge.node_from == *nf && edge.layer_to == *lt &&
                                 edge.node_to == *nt;
            const bool backward = !s.edge_directed(edge) && edge.layer_from == *lt && edge.node_from == *nt &&
                                  edge.layer_to == *lf && edge.node_to == *nf;
            if (forward || backward) found = e;
        }
    }
    if (!found)
        throw Error("unknown-edge", "no edge (" + sel.layer_from + ", " + sel.node_from + ") -> (" + sel.layer_to +
                                        ", " + sel.node_to + ")");
    const auto& edge = s.edges()[*found];
    SelectionPayload p;
    p.layers = {edge.layer_from, edge.layer_to};
    p.state_nodes = {s.state_index(edge.layer_from, edge.node_from), s.state_index(edge.layer_to, edge.node_to)};
    (edge.intralayer() ? p.intralayer_edges : p.interlayer_edges).push_back(*found);
    finish_payload(s, p);
    return p;
}

SelectionPayload select(const NetworkSnapshot& s, const Selection& selection) {
    if (auto* n = std::get_if<NodeSelection>(&selection)) return select_node(s, n->node_id);
    return select_edge(s, std::get<EdgeSelection>(selection));
}

FilteredView apply_filters(const NetworkSnapshot& s, const Filters& filters, const std::optional<Selection>& selection) {
    FilteredView view;
    const auto query = lower(filters.node_query);
    std::vector<char> visible(s.state_nodes().size(), 0);
    for (std::size_t st = 0; st < s.state_nodes().size(); ++st) {
        if (state_visible(s, s.state_nodes()[st], filters, query)) {
            visible[st] = 1;
            view.state_nodes.push_back(st);
        }
    }
    for (std::size_t e = 0; e < s.edges().size(); ++e) {
        const auto& edge = s.edges()[e];
        const auto from = s.state_index(edge.layer_from, edge.node_from);
        const auto to = s.state_index(edge.layer_to, edge.node_to);
        if (!visible[from] || !visible[to]) continue;
        if (edge.intralayer()) {
            if (edge.weight >= filters.min_weight_intra) view.intralayer_edges.push_back(e);
        } else if (filters.show_interlayer && edge.weight >= filters.min_weight_inter) {
            view.interlayer_edges.push_back(e);
        }
    }
    if (selection) {
        const auto payload = select(s, *selection);
        for (auto st : view.state_nodes)
            if (!std::binary_search(payload.state_nodes.begin(), payload.state_nodes.end(), st))
                view.dimmed_state_nodes.push_back(st);
        auto dim_edges = [&](const std::vector<std::size_t>& shown, const std::vector<std::size_t>& lit) {
            for (auto e : shown)
                if (!std::binary_search(lit.begin(), lit.end(), e)) view.dimmed_edges.push_back(e);
        };
        dim_edges(view.intralayer_edges, payload.intralayer_edges);
        dim_edges(view.interlayer_edges, payload.interlayer_edges);
        std::sort(view.dimmed_edges.begin(), view.dimmed_edges.end());
    }
    return view;
}

LayerComparison compare_layers(const NetworkSnapshot& s, std::size_t a, std::size_t b, std::size_t bins) {
    if (a >= s.layer_count() || b >= s.layer_count()) throw Error("unknown-layer", "layer index out of range");
    LayerComparison out;
    out.a = a;
    out.b = b;
    const auto ma = s.members(a), mb = s.members(b);
    std::set_intersection(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(out.shared_nodes));
    const auto ka = layer_edge_keys(s, a), kb = layer_edge_keys(s, b);
    std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(out.shared_edges));
    out.jaccard_node = jaccard_nodes(s, a, b);
    out.jaccard_edge = jaccard_edges(s, a, b);

    auto degrees = [&](std::size_t layer) {
        std::vector<double> d;
        for (auto st : s.layer_state_nodes(layer)) d.push_back(static_cast<double>(s.incident_intralayer(st).size()));
        return d;
    };
    const auto da = degrees(a), db = degrees(b);
    if (da.empty() && db.empty()) return out;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* d : {&da, &db})
        for (double x : *d) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    out.degree_a = histogram_on_range(da, lo, hi, bins);
    out.degree_b = histogram_on_range(db, lo, hi, bins);
    return out;
}

}  // namespace mln
