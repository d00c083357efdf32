#include "mln/report.hpp"

#include <cmath>

#include "mln/csv.hpp"
#include "mln/error.hpp"

namespace mln::report {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json matrix(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json matrix(const Eigen::MatrixXi& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const Histogram& h) {
    Json j;
    j["edges"] = h.edges;
    j["counts"] = h.counts;
    return j;
}

Json point(const Eigen::Vector2d& p) { return Json::array({p.x(), p.y()}); }

Json layer_ids(const NetworkSnapshot& s) {
    Json ids = Json::array();
    for (const auto& l : s.layers()) ids.push_back(l.id);
    return ids;
}

Json state_ref(const NetworkSnapshot& s, std::size_t st) {
    const auto& sn = s.state_nodes()[st];
    return {{"layer_id", s.layers()[sn.layer].id}, {"node_id", s.nodes()[sn.node].id}};
}

Json edge_ref(const NetworkSnapshot& s, std::size_t e) {
    const auto& edge = s.edges()[e];
    return {{"layer_from", s.layers()[edge.layer_from].id},
            {"node_from", s.nodes()[edge.node_from].id},
            {"layer_to", s.layers()[edge.layer_to].id},
            {"node_to", s.nodes()[edge.node_to].id},
            {"weight", edge.weight},
            {"class", to_string(edge.kind.link)},
            {"coupling", to_string(edge.kind.coupling)}};
}

Json state_list(const NetworkSnapshot& s, const std::vector<std::size_t>& ids) {
    Json arr = Json::array();
    for (auto st : ids) arr.push_back(state_ref(s, st));
    return arr;
}

Json edge_list(const NetworkSnapshot& s, const std::vector<std::size_t>& ids) {
    Json arr = Json::array();
    for (auto e : ids) arr.push_back(edge_ref(s, e));
    return arr;
}

Json attribute_json(const AttributeValue& v) {
    return std::visit([](const auto& x) { return Json(x); }, v);
}

std::string_view scope_name(AttributeFilter::Scope s) {
    switch (s) {
        case AttributeFilter::Scope::state_node: return "state_node";
        case AttributeFilter::Scope::layer: return "layer";
        default: return "node";
    }
}

std::string_view op_name(AttributeFilter::Op op) {
    switch (op) {
        case AttributeFilter::Op::ne: return "ne";
        case AttributeFilter::Op::lt: return "lt";
        case AttributeFilter::Op::le: return "le";
        case AttributeFilter::Op::gt: return "gt";
        case AttributeFilter::Op::ge: return "ge";
        case AttributeFilter::Op::contains: return "contains";
        default: return "eq";
    }
}

[[noreturn]] void bad(const std::string& what) { throw Error("invalid-view-state", what); }

template <typename T>
T get(const nlohmann::json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        bad(std::string("field '") + key + "' has the wrong type");
    }
}

double get_number(const nlohmann::json& j, const char* key, double fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_number()) bad(std::string("field '") + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) bad(std::string("field '") + key + "' must be finite");
    return v;
}

}  // namespace

Json to_json(const ValidationReport& r) {
    auto issues = [](const std::vector<Issue>& list) {
        Json arr = Json::array();
        for (const auto& i : list) arr.push_back({{"code", i.code}, {"path", i.path}, {"message", i.message}});
        return arr;
    };
    Json j;
    j["valid"] = r.ok();
    j["errors"] = issues(r.errors);
    j["warnings"] = issues(r.warnings);
    j["flags"] = {{"directed", r.flags.directed},
                  {"directed_interlayer", r.flags.directed_interlayer},
                  {"inferred_from", to_string(r.flags.inferred_from)}};
    return j;
}

Json to_json(const NetworkSnapshot& s, const MetricsBundle& b) {
    Json j;
    std::size_t intra = 0, inter = 0;
    for (const auto& e : s.edges()) (e.intralayer() ? intra : inter) += 1;
    j["summary"] = {{"layers", s.layer_count()},
                    {"physical_nodes", s.node_count()},
                    {"state_nodes", s.state_nodes().size()},
                    {"intralayer_links", intra},
                    {"interlayer_links", inter},
                    {"directed", s.directed()},
                    {"directed_interlayer", s.directed_interlayer()},
                    {"bins", b.bins}};

    const auto available = b.state.available();
    std::vector<Eigen::VectorXd> columns;
    for (auto m : available) columns.push_back(b.state.values(m));
    Json states = Json::array();
    for (std::size_t st = 0; st < s.state_nodes().size(); ++st) {
        Json row = state_ref(s, st);
        for (std::size_t c = 0; c < available.size(); ++c) {
            const double v = columns[c](static_cast<Eigen::Index>(st));
            const auto name = std::string(to_string(available[c]));
            if (name.front() == 'k')
                row[name] = static_cast<long long>(v);
            else
                row[name] = v;
        }
        states.push_back(std::move(row));
    }
    j["state_nodes"] = std::move(states);

    Json nodes = Json::array();
    const auto& agg = b.aggregates;
    for (std::size_t v = 0; v < s.node_count(); ++v) {
        const auto iv = static_cast<Eigen::Index>(v);
        Json row;
        row["node_id"] = s.nodes()[v].id;
        row["participation"] = agg.participation(iv);
        for (std::size_t c = 0; c < agg.metrics.size(); ++c) {
            const auto name = std::string(to_string(agg.metrics[c]));
            row[name + "_sum"] = number(agg.sum(iv, static_cast<Eigen::Index>(c)));
            row[name + "_mean"] = number(agg.mean(iv, static_cast<Eigen::Index>(c)));
        }
        nodes.push_back(std::move(row));
    }
    j["nodes"] = std::move(nodes);

    Json layers = Json::array();
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        const auto ia = static_cast<Eigen::Index>(a);
        Json row;
        row["layer_id"] = s.layers()[a].id;
        row["bipartite"] = s.layers()[a].bipartite;
        row["node_count"] = b.layers.node_count(ia);
        row["edge_count"] = b.layers.edge_count(ia);
        row["density"] = number(b.layers.density(ia));
        if (s.layers()[a].bipartite) {
            Json sets = Json::object();
            for (const auto& set : s.bipartite_sets(a)) sets[set.label] = set.nodes.size();
            row["set_sizes"] = std::move(sets);
        }
        layers.push_back(std::move(row));
    }
    j["layers"] = std::move(layers);
    j["average_density"] = {{"value", number(b.layers.average.value)},
                            {"included_layers", b.layers.average.included},
                            {"excluded_layers", b.layers.average.excluded}};

    Json pw;
    pw["layer_ids"] = layer_ids(s);
    pw["shared_nodes"] = matrix(b.pairwise.shared_nodes);
    pw["shared_edges"] = matrix(b.pairwise.shared_edges);
    pw["jaccard_node"] = matrix(b.pairwise.jaccard_node);
    pw["jaccard_edge"] = matrix(b.pairwise.jaccard_edge);
    Json by_set = Json::object();
    for (std::size_t k = 0; k < b.pairwise.set_labels.size(); ++k)
        by_set[b.pairwise.set_labels[k]] = matrix(b.pairwise.jaccard_node_by_set[k]);
    pw["jaccard_node_by_set"] = std::move(by_set);
    j["pairwise"] = std::move(pw);

    Json dist = Json::object();
    for (const auto& [name, h] : b.distributions.histograms) dist[name] = to_json(h);
    j["distributions"] = std::move(dist);

    Json presence;
    Json node_ids = Json::array();
    for (const auto& n : s.nodes()) node_ids.push_back(n.id);
    presence["node_ids"] = std::move(node_ids);
    presence["layer_ids"] = layer_ids(s);
    presence["matrix"] = matrix(b.distributions.presence);
    j["presence_matrix"] = std::move(presence);
    return j;
}

Json to_json(const NetworkSnapshot& s, const MetaNetwork& meta) {
    Json j;
    j["mode"] = to_string(meta.mode);
    j["directed"] = meta.directed;
    Json nodes = Json::array();
    for (std::size_t k = 0; k < meta.nodes.size(); ++k) {
        const auto ik = static_cast<Eigen::Index>(k);
        Json row;
        row["node_id"] = s.nodes()[meta.nodes[k]].id;
        row["participation"] = s.participation(meta.nodes[k]);
        if (meta.directed) {
            row["in_degree"] = meta.in_degree(ik);
            row["out_degree"] = meta.out_degree(ik);
            row["in_strength"] = meta.in_strength(ik);
            row["out_strength"] = meta.out_strength(ik);
        } else {
            row["degree"] = meta.degree(ik);
            row["strength"] = meta.strength(ik);
        }
        nodes.push_back(std::move(row));
    }
    j["nodes"] = std::move(nodes);
    Json edges = Json::array();
    for (const auto& e : meta.edges) {
        Json row;
        row["node_from"] = e.key.u;
        row["node_to"] = e.key.v;
        row["weight"] = e.weight;
        Json layers = Json::array();
        for (const auto& c : e.layers) layers.push_back({{"layer_id", s.layers()[c.layer].id}, {"weight", c.weight}});
        row["layers"] = std::move(layers);
        edges.push_back(std::move(row));
    }
    j["edges"] = std::move(edges);
    return j;
}

Json to_json(const NetworkSnapshot& s, const SelectionPayload& p) {
    Json j;
    if (p.node) j["node_id"] = s.nodes()[*p.node].id;
    j["participation"] = p.participation;
    Json layers = Json::array();
    for (auto a : p.layers) layers.push_back(s.layers()[a].id);
    j["layers"] = std::move(layers);
    j["state_nodes"] = state_list(s, p.state_nodes);
    j["intralayer_edges"] = edge_list(s, p.intralayer_edges);
    j["interlayer_edges"] = edge_list(s, p.interlayer_edges);
    j["dimmed_state_nodes"] = state_list(s, p.dimmed_state_nodes);
    j["dimmed_edges"] = edge_list(s, p.dimmed_edges);
    return j;
}

Json to_json(const NetworkSnapshot& s, const FilteredView& v) {
    Json j;
    j["state_nodes"] = state_list(s, v.state_nodes);
    j["intralayer_edges"] = edge_list(s, v.intralayer_edges);
    j["interlayer_edges"] = edge_list(s, v.interlayer_edges);
    j["dimmed_state_nodes"] = state_list(s, v.dimmed_state_nodes);
    j["dimmed_edges"] = edge_list(s, v.dimmed_edges);
    return j;
}

Json to_json(const NetworkSnapshot& s, const LayerComparison& c) {
    Json j;
    j["layer_a"] = s.layers()[c.a].id;
    j["layer_b"] = s.layers()[c.b].id;
    Json shared = Json::array();
    for (auto v : c.shared_nodes) shared.push_back(s.nodes()[v].id);
    j["shared_nodes"] = std::move(shared);
    j["jaccard_node"] = number(c.jaccard_node);
    Json edges = Json::array();
    for (const auto& [u, v] : c.shared_edges) edges.push_back(Json::array({s.nodes()[u].id, s.nodes()[v].id}));
    j["shared_edges"] = std::move(edges);
    j["jaccard_edge"] = number(c.jaccard_edge);
    j["degree_a"] = to_json(c.degree_a);
    j["degree_b"] = to_json(c.degree_b);
    return j;
}

Json to_json(const NetworkSnapshot& s, const LayerGraphLayout& l) {
    Json j;
    j["mode"] = to_string(l.mode);
    Json pos = Json::object();
    Json jit = Json::object();
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        pos[s.layers()[a].id] = point(l.positions.col(static_cast<Eigen::Index>(a)));
        jit[s.layers()[a].id] = point(l.jitter.col(static_cast<Eigen::Index>(a)));
    }
    j["positions"] = std::move(pos);
    if (l.mode == LayerGraphMode::geographic) {
        j["jitter"] = std::move(jit);
        j["center"] = point(l.center);
        j["scale"] = l.scale;
        j["zoom"] = l.zoom;
    }
    Json links = Json::array();
    for (const auto& link : l.links)
        links.push_back({{"layer_a", s.layers()[link.a].id},
                         {"layer_b", s.layers()[link.b].id},
                         {"shared_nodes", link.shared_nodes},
                         {"coupling_count", link.coupling_count},
                         {"coupling_weight", link.coupling_weight},
                         {"attraction", link.attraction}});
    j["links"] = std::move(links);
    return j;
}

Json to_json(const GridLayout& g) {
    Json j;
    j["columns"] = g.columns;
    j["rows"] = g.rows;
    Json cells = Json::array();
    for (const auto& c : g.cells)
        cells.push_back({{"layer", c.layer}, {"x", c.x}, {"y", c.y}, {"width", c.width}, {"height", c.height}});
    j["cells"] = std::move(cells);
    return j;
}

Json local_layout_json(const NetworkSnapshot& s, const LayerLocalLayout& layout) {
    Json j;
    if (layout.layer != kUnionLayer) j["layer_id"] = s.layers()[layout.layer].id;
    j["kind"] = to_string(layout.kind);
    Json nodes = Json::object();
    for (std::size_t k = 0; k < layout.nodes.size(); ++k)
        nodes[s.nodes()[layout.nodes[k]].id] = point(layout.positions.col(static_cast<Eigen::Index>(k)));
    j["nodes"] = std::move(nodes);
    return j;
}

Json stack_json(const NetworkSnapshot& s, const std::vector<LayerLocalLayout>& layouts,
                const StackProjection& projection, std::uint64_t seed) {
    Json j;
    j["seed"] = seed;
    const auto& p = projection.params;
    j["params"] = {{"scale", p.scale},
                   {"compression", p.compression},
                   {"layer_gap", p.layer_gap},
                   {"shear_x", p.shear_x},
                   {"shear_y", p.shear_y}};
    Json layers = Json::array();
    for (const auto& l : layouts) layers.push_back(local_layout_json(s, l));
    j["layers"] = std::move(layers);
    Json states = Json::array();
    for (std::size_t st = 0; st < s.state_nodes().size(); ++st) {
        Json row = state_ref(s, st);
        row["x"] = projection.screen(0, static_cast<Eigen::Index>(st));
        row["y"] = projection.screen(1, static_cast<Eigen::Index>(st));
        states.push_back(std::move(row));
    }
    j["state_nodes"] = std::move(states);
    return j;
}

std::string metrics_document(const NetworkSnapshot& s, std::size_t bins) {
    return to_json(s, compute_bundle(s, bins)).dump(2) + "\n";
}

std::string metrics_csv(const NetworkSnapshot& s, std::size_t bins) {
    const auto b = compute_bundle(s, bins);
    csv::Table t;
    t.header = {"scope", "layer_id", "node_id", "metric", "value"};
    auto fmt = [](double v) { return std::isfinite(v) ? csv::format_number(v) : std::string{}; };
    const auto available = b.state.available();
    for (auto m : available) {
        const auto values = b.state.values(m);
        for (std::size_t st = 0; st < s.state_nodes().size(); ++st) {
            const auto& sn = s.state_nodes()[st];
            t.rows.push_back({"state_node", s.layers()[sn.layer].id, s.nodes()[sn.node].id, std::string(to_string(m)),
                              fmt(values(static_cast<Eigen::Index>(st)))});
        }
    }
    for (std::size_t v = 0; v < s.node_count(); ++v) {
        const auto iv = static_cast<Eigen::Index>(v);
        const auto& id = s.nodes()[v].id;
        t.rows.push_back({"node", "", id, "participation", fmt(b.aggregates.participation(iv))});
        for (std::size_t c = 0; c < b.aggregates.metrics.size(); ++c) {
            const auto name = std::string(to_string(b.aggregates.metrics[c]));
            t.rows.push_back({"node", "", id, name + "_sum", fmt(b.aggregates.sum(iv, static_cast<Eigen::Index>(c)))});
            t.rows.push_back({"node", "", id, name + "_mean", fmt(b.aggregates.mean(iv, static_cast<Eigen::Index>(c)))});
        }
    }
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        const auto ia = static_cast<Eigen::Index>(a);
        const auto& id = s.layers()[a].id;
        t.rows.push_back({"layer", id, "", "node_count", fmt(b.layers.node_count(ia))});
        t.rows.push_back({"layer", id, "", "edge_count", fmt(b.layers.edge_count(ia))});
        t.rows.push_back({"layer", id, "", "density", fmt(b.layers.density(ia))});
    }
    t.rows.push_back({"network", "", "", "average_density", fmt(b.layers.average.value)});
    for (std::size_t a = 0; a < s.layer_count(); ++a)
        for (std::size_t c = 0; c < s.layer_count(); ++c) {
            const auto ia = static_cast<Eigen::Index>(a), ic = static_cast<Eigen::Index>(c);
            const auto pair = s.layers()[a].id + "|" + s.layers()[c].id;
            t.rows.push_back({"pair", pair, "", "jaccard_node", fmt(b.pairwise.jaccard_node(ia, ic))});
            t.rows.push_back({"pair", pair, "", "jaccard_edge", fmt(b.pairwise.jaccard_edge(ia, ic))});
        }
    return csv::write(t);
}

std::string layout_document(const NetworkSnapshot& s, std::uint64_t seed, double width, double height) {
    Json j;
    const auto layouts = layout_all_layers(s, seed);
    const auto params = StackParams<double>::for_scale(kDefaultStackScale);
    j["stack"] = stack_json(s, layouts, project_stack(s, layouts, params), seed);
    j["layer_graph"] = to_json(s, layout_layer_graph(s, seed));
    try {
        j["geographic"] = to_json(s, layout_geographic(s));
    } catch (const Error&) {
        j["geographic"] = nullptr;
    }
    Json grid = to_json(layout_grid(s.layer_count(), width, height));
    grid["shared_layout"] = local_layout_json(s, layout_union(s, seed));
    j["grid"] = std::move(grid);
    return j.dump(2) + "\n";
}

Json export_view(const NetworkSnapshot& s, const ViewState& view) {
    const auto layouts = layout_all_layers(s, view.layer_seed);
    const auto projection = project_stack(s, layouts, view.projection);
    const auto filtered = apply_filters(s, view.filters, view.selection);
    auto dimmed = [](const std::vector<std::size_t>& list, std::size_t x) {
        return std::binary_search(list.begin(), list.end(), x);
    };
    Json circles = Json::array();
    for (auto st : filtered.state_nodes) {
        Json c = state_ref(s, st);
        c["x"] = projection.screen(0, static_cast<Eigen::Index>(st));
        c["y"] = projection.screen(1, static_cast<Eigen::Index>(st));
        c["dimmed"] = dimmed(filtered.dimmed_state_nodes, st);
        circles.push_back(std::move(c));
    }
    Json lines = Json::array();
    auto add_lines = [&](const std::vector<std::size_t>& edges) {
        for (auto e : edges) {
            const auto& edge = s.edges()[e];
            const auto a = static_cast<Eigen::Index>(s.state_index(edge.layer_from, edge.node_from));
            const auto b = static_cast<Eigen::Index>(s.state_index(edge.layer_to, edge.node_to));
            Json l = edge_ref(s, e);
            l["x1"] = projection.screen(0, a);
            l["y1"] = projection.screen(1, a);
            l["x2"] = projection.screen(0, b);
            l["y2"] = projection.screen(1, b);
            l["directed"] = s.edge_directed(edge);
            l["dimmed"] = dimmed(filtered.dimmed_edges, e);
            lines.push_back(std::move(l));
        }
    };
    add_lines(filtered.intralayer_edges);
    add_lines(filtered.interlayer_edges);
    Json j;
    j["mode"] = to_string(view.active_mode);
    j["circles"] = std::move(circles);
    j["lines"] = std::move(lines);
    return j;
}

Json to_json(const Filters& f) {
    Json j;
    j["min_weight_intra"] = f.min_weight_intra;
    j["min_weight_inter"] = f.min_weight_inter;
    j["show_interlayer"] = f.show_interlayer;
    if (f.visible_layers)
        j["visible_layers"] = Json(std::vector<std::string>(f.visible_layers->begin(), f.visible_layers->end()));
    else
        j["visible_layers"] = nullptr;
    j["node_query"] = f.node_query;
    Json afs = Json::array();
    for (const auto& af : f.attribute_filters)
        afs.push_back({{"scope", scope_name(af.scope)},
                       {"key", af.key},
                       {"op", op_name(af.op)},
                       {"value", attribute_json(af.value)}});
    j["attribute_filters"] = std::move(afs);
    return j;
}

Json to_json(const ViewState& v) {
    Json j;
    j["active_mode"] = to_string(v.active_mode);
    j["filters"] = to_json(v.filters);
    if (!v.selection)
        j["selection"] = nullptr;
    else if (auto* n = std::get_if<NodeSelection>(&*v.selection))
        j["selection"] = {{"node_id", n->node_id}};
    else {
        const auto& e = std::get<EdgeSelection>(*v.selection);
        j["selection"] = {{"edge",
                           {{"layer_from", e.layer_from},
                            {"node_from", e.node_from},
                            {"layer_to", e.layer_to},
                            {"node_to", e.node_to}}}};
    }
    const auto& p = v.projection;
    j["projection"] = {{"scale", p.scale},
                       {"compression", p.compression},
                       {"layer_gap", p.layer_gap},
                       {"shear_x", p.shear_x},
                       {"shear_y", p.shear_y}};
    j["layer_seed"] = v.layer_seed;
    j["layer_graph_seed"] = v.layer_graph_seed;
    j["layer_graph_weights"] = {
        {"shared", v.layer_graph_weights.shared},
        {"coupling", v.layer_graph_weights.coupling},
        {"normalization", v.layer_graph_weights.normalization == SharedNormalization::jaccard ? "jaccard" : "raw"}};
    j["meta_mode"] = to_string(v.meta_mode);
    j["meta_threshold"] = v.meta_threshold;
    return j;
}

Filters filters_from_json(const nlohmann::json& j) {
    if (!j.is_object()) bad("filters must be an object");
    Filters f;
    f.min_weight_intra = get_number(j, "min_weight_intra", 0.0);
    f.min_weight_inter = get_number(j, "min_weight_inter", 0.0);
    f.show_interlayer = get<bool>(j, "show_interlayer", false);
    if (auto it = j.find("visible_layers"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) bad("visible_layers must be an array or null");
        std::set<std::string> layers;
        for (const auto& l : *it) {
            if (!l.is_string()) bad("visible_layers entries must be strings");
            layers.insert(l.get<std::string>());
        }
        f.visible_layers = std::move(layers);
    }
    f.node_query = get<std::string>(j, "node_query", "");
    if (auto it = j.find("attribute_filters"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) bad("attribute_filters must be an array");
        for (const auto& a : *it) {
            if (!a.is_object()) bad("attribute filter must be an object");
            AttributeFilter af;
            const auto scope = get<std::string>(a, "scope", "node");
            if (scope == "node")
                af.scope = AttributeFilter::Scope::node;
            else if (scope == "state_node")
                af.scope = AttributeFilter::Scope::state_node;
            else if (scope == "layer")
                af.scope = AttributeFilter::Scope::layer;
            else
                bad("unknown attribute filter scope '" + scope + "'");
            af.key = get<std::string>(a, "key", "");
            if (af.key.empty()) bad("attribute filter needs a key");
            const auto op = get<std::string>(a, "op", "eq");
            static const std::pair<const char*, AttributeFilter::Op> ops[] = {
                {"eq", AttributeFilter::Op::eq}, {"ne", AttributeFilter::Op::ne}, {"lt", AttributeFilter::Op::lt},
                {"le", AttributeFilter::Op::le}, {"gt", AttributeFilter::Op::gt}, {"ge", AttributeFilter::Op::ge},
                {"contains", AttributeFilter::Op::contains}};
            bool found = false;
            for (const auto& [name, value] : ops)
                if (op == name) {
                    af.op = value;
                    found = true;
                }
            if (!found) bad("unknown attribute filter op '" + op + "'");
            auto v = a.find("value");
            if (v == a.end()) bad("attribute filter needs a value");
            if (v->is_string())
                af.value = v->get<std::string>();
            else if (v->is_boolean())
                af.value = v->get<bool>();
            else if (v->is_number())
                af.value = v->get<double>();
            else
                bad("attribute filter value must be a scalar or string");
            f.attribute_filters.push_back(std::move(af));
        }
    }
    return f;
}

std::optional<Selection> selection_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_object()) bad("selection must be an object or null");
    if (j.contains("node_id")) {
        const auto& n = j["node_id"];
        if (!n.is_string()) bad("selection node_id must be a string");
        return Selection{NodeSelection{n.get<std::string>()}};
    }
    if (j.contains("edge")) {
        const auto& e = j["edge"];
        if (!e.is_object()) bad("selection edge must be an object");
        EdgeSelection sel;
        sel.layer_from = get<std::string>(e, "layer_from", "");
        sel.node_from = get<std::string>(e, "node_from", "");
        sel.layer_to = get<std::string>(e, "layer_to", "");
        sel.node_to = get<std::string>(e, "node_to", "");
        return Selection{sel};
    }
    bad("selection needs node_id or edge");
}

ViewState view_state_from_json(const nlohmann::json& j) {
    if (!j.is_object()) bad("view_state must be an object");
    ViewState v;
    const auto mode = get<std::string>(j, "active_mode", "network");
    if (auto m = mode_from_string(mode))
        v.active_mode = *m;
    else
        bad("unknown mode '" + mode + "'");
    if (auto it = j.find("filters"); it != j.end() && !it->is_null()) v.filters = filters_from_json(*it);
    if (auto it = j.find("selection"); it != j.end()) v.selection = selection_from_json(*it);
    if (auto it = j.find("projection"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) bad("projection must be an object");
        auto& p = v.projection;
        p.scale = get_number(*it, "scale", p.scale);
        p.compression = get_number(*it, "compression", p.compression);
        p.layer_gap = get_number(*it, "layer_gap", p.layer_gap);
        p.shear_x = get_number(*it, "shear_x", p.shear_x);
        p.shear_y = get_number(*it, "shear_y", p.shear_y);
        if (!(p.layer_gap > 0.0)) bad("layer_gap must be positive");
    }
    v.layer_seed = get<std::uint64_t>(j, "layer_seed", v.layer_seed);
    v.layer_graph_seed = get<std::uint64_t>(j, "layer_graph_seed", v.layer_graph_seed);
    if (auto it = j.find("layer_graph_weights"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) bad("layer_graph_weights must be an object");
        v.layer_graph_weights.shared = get_number(*it, "shared", 1.0);
        v.layer_graph_weights.coupling = get_number(*it, "coupling", 1.0);
        const auto norm = get<std::string>(*it, "normalization", "raw");
        if (norm == "jaccard")
            v.layer_graph_weights.normalization = SharedNormalization::jaccard;
        else if (norm != "raw")
            bad("normalization must be raw or jaccard");
    }
    const auto meta = get<std::string>(j, "meta_mode", "sum_weights");
    if (auto m = aggregation_from_string(meta))
        v.meta_mode = *m;
    else
        bad("unknown meta_mode '" + meta + "'");
    v.meta_threshold = get_number(j, "meta_threshold", 0.0);
    return v;
}

}  // namespace mln::report
