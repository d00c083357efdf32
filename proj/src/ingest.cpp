#include "mln/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "mln/csv.hpp"
#include "mln/error.hpp"

namespace mln {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(FlagSource s) {
    switch (s) {
        case FlagSource::explicit_flag: return "explicit";
        case FlagSource::per_link: return "per_link";
        default: return "default";
    }
}

bool ValidationReport::has_error(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(), [&](const Issue& i) { return i.code == code; });
}

bool ValidationReport::has_warning(std::string_view code) const {
    return std::any_of(warnings.begin(), warnings.end(), [&](const Issue& i) { return i.code == code; });
}

DirectednessResult normalize_directedness(std::optional<bool> directed,
                                          std::optional<bool> directed_interlayer,
                                          std::span<const PerLinkFlag> per_link) {
    auto any_directed = [&](LinkClass c) {
        return std::any_of(per_link.begin(), per_link.end(), [c](const PerLinkFlag& f) {
            return f.link == c && f.directed.value_or(false);
        });
    };

    DirectednessResult out;
    bool explicit_used = false;
    bool inferred_used = false;

    if (directed) {
        out.flags.directed = *directed;
        explicit_used = true;
    } else if (any_directed(LinkClass::intralayer)) {
        out.flags.directed = true;
        inferred_used = true;
    }

    if (out.flags.directed) {
        out.flags.directed_interlayer = true;
        if (directed_interlayer == false)
            out.warnings.push_back({"directed-flag-override", "/directed_interlayer",
                                    "directed=true forces directed_interlayer=true"});
        if (directed_interlayer) explicit_used = true;
    } else if (directed_interlayer) {
        out.flags.directed_interlayer = *directed_interlayer;
        explicit_used = true;
    } else if (any_directed(LinkClass::interlayer)) {
        out.flags.directed_interlayer = true;
        inferred_used = true;
    }

    out.flags.inferred_from = inferred_used   ? FlagSource::per_link
                              : explicit_used ? FlagSource::explicit_flag
                                              : FlagSource::default_value;
    return out;
}

namespace {

const std::set<std::string, std::less<>> kLayerFields = {"layer_id", "name", "latitude", "longitude",
                                                         "bipartite"};
const std::set<std::string, std::less<>> kNodeFields = {"node_id", "node_type"};
const std::set<std::string, std::less<>> kStateFields = {"layer_id", "node_id"};
const std::set<std::string, std::less<>> kEdgeFields = {"layer_from", "node_from", "layer_to",
                                                        "node_to",    "weight",    "directed"};
const char* const kArrays[] = {"layers", "nodes", "extended", "state_nodes"};

std::string pointer(std::string_view base, std::size_t index, std::string_view field = {}) {
    std::string p(base);
    p += '/';
    p += std::to_string(index);
    if (!field.empty()) {
        p += '/';
        p += field;
    }
    return p;
}

struct RawEdge {
    std::size_t index;  // position in the extended array
    ExtendedEdge edge;
};

class DocumentBuilder {
public:
    IngestResult build(const json& doc) {
        if (!doc.is_object()) {
            error("malformed-field-type", "", "network document must be a JSON object");
            return finish();
        }
        bool arrays_ok = true;
        for (const char* name : kArrays) {
            auto it = doc.find(name);
            if (it == doc.end()) {
                error("missing-required-array", std::string("/") + name,
                      std::string("required array '") + name + "' is missing");
                arrays_ok = false;
            } else if (!it->is_array()) {
                error("malformed-field-type", std::string("/") + name,
                      std::string("'") + name + "' must be an array");
                arrays_ok = false;
            }
        }
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            const auto& key = it.key();
            if (key != "directed" && key != "directed_interlayer" &&
                std::none_of(std::begin(kArrays), std::end(kArrays), [&](const char* a) { return key == a; }))
                warn("unknown-field", "/" + key, "top-level field '" + key + "' is ignored");
        }
        const auto directed = read_flag(doc, "directed");
        const auto directed_interlayer = read_flag(doc, "directed_interlayer");
        if (!arrays_ok) return finish();

        read_layers(doc["layers"]);
        read_nodes(doc["nodes"]);
        read_state_nodes(doc["state_nodes"]);
        read_edges(doc["extended"]);

        std::vector<PerLinkFlag> per_link;
        per_link.reserve(raw_edges_.size());
        for (const auto& r : raw_edges_)
            per_link.push_back({r.edge.intralayer() ? LinkClass::intralayer : LinkClass::interlayer,
                                r.edge.per_link_directed});
        auto resolved = normalize_directedness(directed, directed_interlayer, per_link);
        report_.flags = resolved.flags;
        for (auto& w : resolved.warnings) report_.warnings.push_back(std::move(w));
        check_per_link_conflicts();

        check_duplicates();
        check_bipartite();
        return finish();
    }

private:
    ValidationReport report_;
    std::vector<LayerDef> layers_;
    std::vector<PhysicalNode> nodes_;
    std::vector<StateNode> states_;
    std::vector<std::size_t> state_positions_;  // index in the input array
    std::vector<RawEdge> raw_edges_;
    std::unordered_map<std::string, std::size_t> layer_ids_;
    std::unordered_map<std::string, std::size_t> node_ids_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> state_ids_;

    void error(std::string code, std::string path, std::string message) {
        report_.errors.push_back({std::move(code), std::move(path), std::move(message)});
    }
    void warn(std::string code, std::string path, std::string message) {
        report_.warnings.push_back({std::move(code), std::move(path), std::move(message)});
    }

    IngestResult finish() {
        IngestResult result;
        if (report_.ok()) {
            std::vector<ExtendedEdge> edges;
            edges.reserve(raw_edges_.size());
            for (auto& r : raw_edges_) edges.push_back(r.edge);
            try {
                result.snapshot.emplace(std::move(layers_), std::move(nodes_), std::move(states_),
                                        std::move(edges),
                                        DirectednessFlags{report_.flags.directed, report_.flags.directed_interlayer});
            } catch (const Error& e) {
                error("invalid-snapshot", "", e.what());
            }
        }
        result.report = std::move(report_);
        return result;
    }

    std::optional<bool> read_flag(const json& doc, const char* name) {
        auto it = doc.find(name);
        if (it == doc.end() || it->is_null()) return std::nullopt;
        if (!it->is_boolean()) {
            error("malformed-field-type", std::string("/") + name, std::string("'") + name + "' must be a boolean");
            return std::nullopt;
        }
        return it->get<bool>();
    }

    // Identifiers are strings; integral JSON numbers are accepted and rendered
    // in decimal so that numeric ids from R exports resolve.
    std::optional<std::string> read_id(const json& obj, const char* field, const std::string& path) {
        auto it = obj.find(field);
        if (it == obj.end() || it->is_null()) {
            error("missing-required-field", path + "/" + field, std::string("'") + field + "' is required");
            return std::nullopt;
        }
        if (it->is_string()) {
            auto s = it->get<std::string>();
            if (s.empty()) {
                error("malformed-field-type", path + "/" + field, std::string("'") + field + "' is empty");
                return std::nullopt;
            }
            return s;
        }
        if (it->is_number_integer()) return it->dump();
        error("malformed-field-type", path + "/" + field,
              std::string("'") + field + "' must be a string identifier");
        return std::nullopt;
    }

    Attributes read_attributes(const json& obj, const std::set<std::string, std::less<>>& reserved,
                               const std::string& path) {
        Attributes attrs;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (reserved.count(it.key())) continue;
            const auto& v = *it;
            const auto where = path + "/" + it.key();
            if (v.is_string()) {
                attrs.emplace(it.key(), v.get<std::string>());
            } else if (v.is_boolean()) {
                attrs.emplace(it.key(), v.get<bool>());
            } else if (v.is_number()) {
                const double d = v.get<double>();
                if (!std::isfinite(d)) {
                    error("malformed-field-type", where, "attribute values must be finite");
                    continue;
                }
                attrs.emplace(it.key(), d);
            } else if (v.is_null()) {
                warn("null-attribute", where, "null attribute '" + it.key() + "' dropped");
            } else {
                error("malformed-field-type", where, "attribute '" + it.key() + "' must be a scalar or string");
            }
        }
        return attrs;
    }

    std::optional<double> read_coordinate(const json& obj, const char* field, const std::string& path,
                                          double limit) {
        auto it = obj.find(field);
        if (it == obj.end() || it->is_null()) return std::nullopt;
        if (!it->is_number()) {
            error("malformed-field-type", path + "/" + field, std::string("'") + field + "' must be a number");
            return std::nullopt;
        }
        const double d = it->get<double>();
        if (!std::isfinite(d) || d < -limit || d > limit) {
            error("coordinate-out-of-range", path + "/" + field,
                  std::string("'") + field + "' must lie in [-" + std::to_string(static_cast<int>(limit)) + ", " +
                      std::to_string(static_cast<int>(limit)) + "]");
            return std::nullopt;
        }
        return d;
    }

    void read_layers(const json& arr) {
        if (arr.empty()) error("empty-layers", "/layers", "a network needs at least one layer");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto path = pointer("/layers", i);
            const auto& obj = arr[i];
            if (!obj.is_object()) {
                error("malformed-field-type", path, "layer entries must be objects");
                continue;
            }
            auto id = read_id(obj, "layer_id", path);
            LayerDef layer;
            if (auto it = obj.find("name"); it != obj.end() && !it->is_null()) {
                if (it->is_string())
                    layer.display_name = it->get<std::string>();
                else if (it->is_number())
                    layer.display_name = it->dump();
                else
                    error("malformed-field-type", path + "/name", "'name' must be a string");
            }
            const bool has_lat = obj.contains("latitude") && !obj["latitude"].is_null();
            const bool has_lon = obj.contains("longitude") && !obj["longitude"].is_null();
            layer.latitude = read_coordinate(obj, "latitude", path, 90.0);
            layer.longitude = read_coordinate(obj, "longitude", path, 180.0);
            if (has_lat != has_lon) {
                error("incomplete-coordinates", path,
                      "latitude and longitude must be given together");
                layer.latitude.reset();
                layer.longitude.reset();
            }
            if (auto it = obj.find("bipartite"); it != obj.end() && !it->is_null()) {
                if (it->is_boolean())
                    layer.bipartite = it->get<bool>();
                else
                    error("malformed-field-type", path + "/bipartite", "'bipartite' must be true or false");
            }
            layer.attributes = read_attributes(obj, kLayerFields, path);
            if (!id) continue;
            if (layer.display_name.empty()) layer.display_name = *id;
            layer.id = *id;
            if (!layer_ids_.emplace(*id, layers_.size()).second) {
                error("duplicate-id", path + "/layer_id", "duplicate layer_id '" + *id + "'");
                continue;
            }
            layers_.push_back(std::move(layer));
        }
    }

    void read_nodes(const json& arr) {
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto path = pointer("/nodes", i);
            const auto& obj = arr[i];
            if (!obj.is_object()) {
                error("malformed-field-type", path, "node entries must be objects");
                continue;
            }
            auto id = read_id(obj, "node_id", path);
            PhysicalNode node;
            if (auto it = obj.find("node_type"); it != obj.end() && !it->is_null()) {
                if (it->is_string())
                    node.node_type = it->get<std::string>();
                else
                    error("malformed-field-type", path + "/node_type", "'node_type' must be a string");
            }
            node.attributes = read_attributes(obj, kNodeFields, path);
            if (!id) continue;
            node.id = *id;
            if (!node_ids_.emplace(*id, nodes_.size()).second) {
                error("duplicate-id", path + "/node_id", "duplicate node_id '" + *id + "'");
                continue;
            }
            nodes_.push_back(std::move(node));
        }
    }

    void read_state_nodes(const json& arr) {
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto path = pointer("/state_nodes", i);
            const auto& obj = arr[i];
            if (!obj.is_object()) {
                error("malformed-field-type", path, "state node entries must be objects");
                continue;
            }
            auto layer = read_id(obj, "layer_id", path);
            auto node = read_id(obj, "node_id", path);
            auto attrs = read_attributes(obj, kStateFields, path);
            if (!layer || !node) continue;
            auto li = layer_ids_.find(*layer);
            auto ni = node_ids_.find(*node);
            if (li == layer_ids_.end()) {
                error("unknown-reference", path + "/layer_id", "unknown layer '" + *layer + "'");
                continue;
            }
            if (ni == node_ids_.end()) {
                error("unknown-reference", path + "/node_id", "unknown node '" + *node + "'");
                continue;
            }
            if (!state_ids_.emplace(std::pair{li->second, ni->second}, states_.size()).second) {
                error("duplicate-id", path, "duplicate state node (" + *layer + ", " + *node + ")");
                continue;
            }
            states_.push_back({li->second, ni->second, std::move(attrs)});
            state_positions_.push_back(i);
        }
    }

    std::optional<std::pair<std::size_t, std::size_t>> resolve_endpoint(const std::string& layer,
                                                                        const std::string& node,
                                                                        const std::string& path,
                                                                        const char* layer_field) {
        auto li = layer_ids_.find(layer);
        auto ni = node_ids_.find(node);
        if (li == layer_ids_.end()) {
            error("unknown-reference", path + "/" + layer_field, "unknown layer '" + layer + "'");
            return std::nullopt;
        }
        if (ni == node_ids_.end()) {
            error("unknown-reference", path, "unknown node '" + node + "'");
            return std::nullopt;
        }
        if (!state_ids_.count({li->second, ni->second})) {
            error("unknown-reference", path,
                  "endpoint (" + layer + ", " + node + ") is not listed in state_nodes");
            return std::nullopt;
        }
        return std::pair{li->second, ni->second};
    }

    void read_edges(const json& arr) {
        std::set<std::string> unknown_reported;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto path = pointer("/extended", i);
            const auto& obj = arr[i];
            if (!obj.is_object()) {
                error("malformed-field-type", path, "edge entries must be objects");
                continue;
            }
            auto lf = read_id(obj, "layer_from", path);
            auto nf = read_id(obj, "node_from", path);
            auto lt = read_id(obj, "layer_to", path);
            auto nt = read_id(obj, "node_to", path);

            ExtendedEdge edge;
            bool ok = lf && nf && lt && nt;
            if (auto it = obj.find("weight"); it != obj.end() && !it->is_null()) {
                if (!it->is_number()) {
                    error("malformed-field-type", path + "/weight", "'weight' must be a number");
                    ok = false;
                } else {
                    edge.weight = it->get<double>();
                    if (!std::isfinite(edge.weight) || edge.weight <= 0.0) {
                        error("invalid-weight", path + "/weight", "weight must be a finite number > 0");
                        ok = false;
                    }
                }
            }
            if (auto it = obj.find("directed"); it != obj.end() && !it->is_null()) {
                if (it->is_boolean())
                    edge.per_link_directed = it->get<bool>();
                else {
                    error("malformed-field-type", path + "/directed", "'directed' must be a boolean");
                    ok = false;
                }
            }
            for (auto it = obj.begin(); it != obj.end(); ++it) {
                if (kEdgeFields.count(it.key())) continue;
                if (unknown_reported.insert(it.key()).second)
                    warn("unknown-edge-field", path + "/" + it.key(),
                         "edge field '" + it.key() + "' is ignored");
            }
            if (!ok) continue;
            auto from = resolve_endpoint(*lf, *nf, path, "layer_from");
            auto to = resolve_endpoint(*lt, *nt, path, "layer_to");
            if (!from || !to) continue;
            edge.layer_from = from->first;
            edge.node_from = from->second;
            edge.layer_to = to->first;
            edge.node_to = to->second;
            edge.kind = classify_edge(*lf, *nf, *lt, *nt);
            raw_edges_.push_back({i, edge});
        }
    }

    void check_per_link_conflicts() {
        bool reported[2] = {false, false};
        for (const auto& r : raw_edges_) {
            if (!r.edge.per_link_directed) continue;
            const bool intra = r.edge.intralayer();
            const bool flag = intra ? report_.flags.directed : report_.flags.directed_interlayer;
            auto& done = reported[intra ? 0 : 1];
            if (*r.edge.per_link_directed != flag && !done) {
                done = true;
                warn("per-link-directed-conflict", pointer("/extended", r.index, "directed"),
                     std::string(intra ? "intralayer" : "interlayer") +
                         " links follow the network-level flag (" + (flag ? "directed" : "undirected") + ")");
            }
        }
    }

    std::string describe(const ExtendedEdge& e) const {
        return "(" + layers_[e.layer_from].id + ", " + nodes_[e.node_from].id + ") -> (" +
               layers_[e.layer_to].id + ", " + nodes_[e.node_to].id + ")";
    }

    void check_duplicates() {
        using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
        std::map<Key, std::size_t> seen;
        std::vector<RawEdge> kept;
        kept.reserve(raw_edges_.size());
        for (auto& r : raw_edges_) {
            const auto& e = r.edge;
            const bool directed = e.intralayer() ? report_.flags.directed : report_.flags.directed_interlayer;
            std::pair<std::size_t, std::size_t> a{e.layer_from, e.node_from}, b{e.layer_to, e.node_to};
            if (!directed && b < a) std::swap(a, b);
            Key key{a.first, a.second, b.first, b.second};
            auto [it, inserted] = seen.emplace(key, r.index);
            if (!inserted) {
                error("duplicate-edge", pointer("/extended", r.index),
                      "edge " + describe(e) + " duplicates /extended/" + std::to_string(it->second));
                continue;
            }
            kept.push_back(r);
        }
        raw_edges_ = std::move(kept);
    }

    void check_bipartite() {
        for (std::size_t a = 0; a < layers_.size(); ++a) {
            if (!layers_[a].bipartite) continue;
            std::set<std::string> labels;
            for (std::size_t s = 0; s < states_.size(); ++s) {
                if (states_[s].layer != a) continue;
                const auto& node = nodes_[states_[s].node];
                if (!node.node_type || node.node_type->empty()) {
                    error("bipartite-missing-node-type", pointer("/state_nodes", state_positions_[s]),
                          "node '" + node.id + "' appears in bipartite layer '" + layers_[a].id +
                              "' without a node_type");
                    continue;
                }
                labels.insert(*node.node_type);
            }
            if (labels.size() > 2)
                error("bipartite-node-type-conflict", pointer("/layers", a),
                      "bipartite layer '" + layers_[a].id + "' has " + std::to_string(labels.size()) +
                          " node types; at most two are allowed");
        }
        bool warned = false;
        for (const auto& r : raw_edges_) {
            const auto& e = r.edge;
            if (warned || !e.intralayer() || e.self_loop() || !layers_[e.layer_from].bipartite) continue;
            const auto& tf = nodes_[e.node_from].node_type;
            const auto& tt = nodes_[e.node_to].node_type;
            if (tf && tt && *tf == *tt) {
                warned = true;
                warn("bipartite-same-set-edge", pointer("/extended", r.index),
                     "edge " + describe(e) + " joins two nodes of the same bipartite set");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Serialization

template <typename Json>
void put_attributes(Json& obj, const Attributes& attrs) {
    for (const auto& [key, value] : attrs)
        std::visit([&](const auto& v) { obj[key] = v; }, value);
}

template <typename Json>
Json layer_json(const LayerDef& layer) {
    Json obj;
    obj["layer_id"] = layer.id;
    obj["name"] = layer.display_name;
    if (layer.has_coordinates()) {
        obj["latitude"] = *layer.latitude;
        obj["longitude"] = *layer.longitude;
    }
    obj["bipartite"] = layer.bipartite;
    put_attributes(obj, layer.attributes);
    return obj;
}

template <typename Json>
Json node_json(const PhysicalNode& node) {
    Json obj;
    obj["node_id"] = node.id;
    if (node.node_type) obj["node_type"] = *node.node_type;
    put_attributes(obj, node.attributes);
    return obj;
}

}  // namespace

IngestResult parse_json(std::string_view document) {
    json doc = json::parse(document.begin(), document.end(), nullptr, false);
    if (doc.is_discarded()) {
        IngestResult result;
        result.report.errors.push_back({"invalid-json", "", "document is not well-formed JSON"});
        return result;
    }
    return DocumentBuilder{}.build(doc);
}

std::string serialize_json(const NetworkSnapshot& s, int indent) {
    ordered_json doc;
    doc["directed"] = s.directed();
    doc["directed_interlayer"] = s.directed_interlayer();
    doc["layers"] = ordered_json::array();
    for (const auto& layer : s.layers()) doc["layers"].push_back(layer_json<ordered_json>(layer));
    doc["nodes"] = ordered_json::array();
    for (const auto& node : s.nodes()) doc["nodes"].push_back(node_json<ordered_json>(node));
    doc["state_nodes"] = ordered_json::array();
    for (const auto& sn : s.state_nodes()) {
        ordered_json obj;
        obj["layer_id"] = s.layers()[sn.layer].id;
        obj["node_id"] = s.nodes()[sn.node].id;
        put_attributes(obj, sn.attributes);
        doc["state_nodes"].push_back(std::move(obj));
    }
    doc["extended"] = ordered_json::array();
    for (const auto& e : s.edges()) {
        ordered_json obj;
        obj["layer_from"] = s.layers()[e.layer_from].id;
        obj["node_from"] = s.nodes()[e.node_from].id;
        obj["layer_to"] = s.layers()[e.layer_to].id;
        obj["node_to"] = s.nodes()[e.node_to].id;
        obj["weight"] = e.weight;
        if (e.per_link_directed) obj["directed"] = *e.per_link_directed;
        doc["extended"].push_back(std::move(obj));
    }
    return doc.dump(indent);
}

std::string canonical_json(const NetworkSnapshot& s) {
    const auto& layers = s.layers();
    const auto& nodes = s.nodes();
    json doc;
    doc["directed"] = s.directed();
    doc["directed_interlayer"] = s.directed_interlayer();
    doc["layers"] = json::array();
    for (const auto& layer : layers) doc["layers"].push_back(layer_json<json>(layer));

    std::vector<const PhysicalNode*> sorted_nodes;
    for (const auto& n : nodes) sorted_nodes.push_back(&n);
    std::sort(sorted_nodes.begin(), sorted_nodes.end(),
              [](auto* a, auto* b) { return a->id < b->id; });
    doc["nodes"] = json::array();
    for (auto* n : sorted_nodes) doc["nodes"].push_back(node_json<json>(*n));

    std::vector<const StateNode*> states;
    for (const auto& sn : s.state_nodes()) states.push_back(&sn);
    std::sort(states.begin(), states.end(), [&](auto* a, auto* b) {
        return std::tie(a->layer, nodes[a->node].id) < std::tie(b->layer, nodes[b->node].id);
    });
    doc["state_nodes"] = json::array();
    for (auto* sn : states) {
        json obj;
        obj["layer_id"] = layers[sn->layer].id;
        obj["node_id"] = nodes[sn->node].id;
        put_attributes(obj, sn->attributes);
        doc["state_nodes"].push_back(std::move(obj));
    }

    using Endpoint = std::pair<std::size_t, std::string>;
    std::vector<std::tuple<Endpoint, Endpoint, double>> edges;
    for (const auto& e : s.edges()) {
        Endpoint a{e.layer_from, nodes[e.node_from].id};
        Endpoint b{e.layer_to, nodes[e.node_to].id};
        if (!s.edge_directed(e) && b < a) std::swap(a, b);
        edges.emplace_back(std::move(a), std::move(b), e.weight);
    }
    std::sort(edges.begin(), edges.end());
    doc["extended"] = json::array();
    for (const auto& [a, b, w] : edges) {
        json obj;
        obj["layer_from"] = layers[a.first].id;
        obj["node_from"] = a.second;
        obj["layer_to"] = layers[b.first].id;
        obj["node_to"] = b.second;
        obj["weight"] = w;
        doc["extended"].push_back(std::move(obj));
    }
    return doc.dump();
}

bool semantically_equal(const NetworkSnapshot& a, const NetworkSnapshot& b) {
    return canonical_json(a) == canonical_json(b);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::optional<bool> parse_bool(std::string_view v) {
    if (v == "true" || v == "TRUE" || v == "True" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "FALSE" || v == "False" || v == "0" || v == "no") return false;
    return std::nullopt;
}

// Attribute cells: numbers and true/false are typed, everything else is text.
json attribute_cell(const std::string& cell) {
    if (auto d = csv::parse_number(cell)) return *d;
    if (cell == "true") return true;
    if (cell == "false") return false;
    return cell;
}

std::string attribute_text(const AttributeValue& v) {
    if (auto* d = std::get_if<double>(&v)) return csv::format_number(*d);
    if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return std::get<std::string>(v);
}

struct CsvBuilder {
    ValidationReport report;

    void error(std::string code, std::string path, std::string message) {
        report.errors.push_back({std::move(code), std::move(path), std::move(message)});
    }

    std::optional<csv::Table> read(const std::string& text, const std::string& table_name) {
        try {
            return csv::read(text);
        } catch (const Error& e) {
            error(e.code(), table_name, e.what());
            return std::nullopt;
        }
    }

    bool require_columns(const csv::Table& t, std::initializer_list<const char*> cols,
                         const std::string& table_name) {
        bool ok = true;
        for (const char* c : cols)
            if (!t.column(c)) {
                error("missing-required-column", table_name + "/" + c,
                      std::string("column '") + c + "' is required in the " + table_name + " table");
                ok = false;
            }
        return ok;
    }

    // Converts an auxiliary table into JSON objects: reserved columns are
    // copied as given (typed by the caller), the rest become attributes.
    json entity_rows(const csv::Table& t, const std::string& table_name,
                     const std::map<std::string, std::string>& typed_columns) {
        json arr = json::array();
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            json obj = json::object();
            for (std::size_t c = 0; c < t.header.size(); ++c) {
                const auto& name = t.header[c];
                const auto& cell = t.rows[r][c];
                if (cell.empty()) continue;
                auto typed = typed_columns.find(name);
                if (typed == typed_columns.end()) {
                    obj[name] = attribute_cell(cell);
                } else if (typed->second == "number") {
                    if (auto d = csv::parse_number(cell))
                        obj[name] = *d;
                    else
                        obj[name] = cell;  // reported as malformed-field-type downstream
                } else if (typed->second == "bool") {
                    if (auto b = parse_bool(cell))
                        obj[name] = *b;
                    else
                        obj[name] = cell;
                } else {
                    obj[name] = cell;
                }
            }
            (void)table_name;
            arr.push_back(std::move(obj));
        }
        return arr;
    }
};

}  // namespace

IngestResult parse_csv(const CsvTables& tables) {
    CsvBuilder b;
    auto edges = b.read(tables.edges, "edges");
    if (!edges) return {std::nullopt, std::move(b.report)};
    if (!b.require_columns(*edges, {"layer_from", "node_from", "layer_to", "node_to"}, "edges"))
        return {std::nullopt, std::move(b.report)};
    // An edgeless network is legal, but only a state_nodes table can describe it.
    if (edges->rows.empty() && !tables.state_nodes) {
        b.error("empty-edges-table", "edges", "the edges table has no rows");
        return {std::nullopt, std::move(b.report)};
    }

    const auto c_lf = *edges->column("layer_from");
    const auto c_nf = *edges->column("node_from");
    const auto c_lt = *edges->column("layer_to");
    const auto c_nt = *edges->column("node_to");
    const auto c_w = edges->column("weight");
    const auto c_d = edges->column("directed");

    std::vector<Issue> warnings;
    for (const auto& h : edges->header)
        if (!kEdgeFields.count(h))
            warnings.push_back({"unknown-edge-field", "edges/" + h, "edge column '" + h + "' is ignored"});

    json doc;
    doc["extended"] = json::array();
    std::vector<std::string> layer_order, node_order;
    std::set<std::string> layer_seen, node_seen;
    std::vector<std::pair<std::string, std::string>> state_order;
    std::set<std::pair<std::string, std::string>> state_seen;
    auto note = [&](const std::string& layer, const std::string& node) {
        if (layer_seen.insert(layer).second) layer_order.push_back(layer);
        if (node_seen.insert(node).second) node_order.push_back(node);
        if (state_seen.emplace(layer, node).second) state_order.emplace_back(layer, node);
    };

    for (std::size_t r = 0; r < edges->rows.size(); ++r) {
        const auto& row = edges->rows[r];
        json e;
        e["layer_from"] = row[c_lf];
        e["node_from"] = row[c_nf];
        e["layer_to"] = row[c_lt];
        e["node_to"] = row[c_nt];
        if (c_w && !row[*c_w].empty()) {
            if (auto w = csv::parse_number(row[*c_w])) {
                e["weight"] = *w;
            } else {
                b.error("non-numeric-weight", "edges/" + std::to_string(r) + "/weight",
                        "weight '" + row[*c_w] + "' is not a finite decimal number");
                continue;
            }
        }
        if (c_d && !row[*c_d].empty()) {
            if (auto d = parse_bool(row[*c_d]))
                e["directed"] = *d;
            else
                e["directed"] = row[*c_d];
        }
        note(row[c_lf], row[c_nf]);
        note(row[c_lt], row[c_nt]);
        doc["extended"].push_back(std::move(e));
    }

    if (tables.layers) {
        auto t = b.read(*tables.layers, "layers");
        if (t && b.require_columns(*t, {"layer_id"}, "layers"))
            doc["layers"] = b.entity_rows(*t, "layers",
                                          {{"layer_id", "id"}, {"name", "text"}, {"latitude", "number"},
                                           {"longitude", "number"}, {"bipartite", "bool"}});
    } else {
        doc["layers"] = json::array();
        for (const auto& l : layer_order) doc["layers"].push_back({{"layer_id", l}});
    }
    if (tables.nodes) {
        auto t = b.read(*tables.nodes, "nodes");
        if (t && b.require_columns(*t, {"node_id"}, "nodes"))
            doc["nodes"] = b.entity_rows(*t, "nodes", {{"node_id", "id"}, {"node_type", "text"}});
    } else {
        doc["nodes"] = json::array();
        for (const auto& n : node_order) doc["nodes"].push_back({{"node_id", n}});
    }
    if (tables.state_nodes) {
        auto t = b.read(*tables.state_nodes, "state_nodes");
        if (t && b.require_columns(*t, {"layer_id", "node_id"}, "state_nodes"))
            doc["state_nodes"] = b.entity_rows(*t, "state_nodes", {{"layer_id", "id"}, {"node_id", "id"}});
    } else {
        doc["state_nodes"] = json::array();
        for (const auto& [l, n] : state_order) doc["state_nodes"].push_back({{"layer_id", l}, {"node_id", n}});
    }

    if (tables.network) {
        auto t = b.read(*tables.network, "network");
        if (t && t->rows.size() != 1) {
            b.error("malformed-field-type", "network", "the network table must have exactly one row");
        } else if (t) {
            for (const char* flag : {"directed", "directed_interlayer"}) {
                const auto c = t->column(flag);
                if (!c || t->rows[0][*c].empty()) continue;
                if (auto v = parse_bool(t->rows[0][*c]))
                    doc[flag] = *v;
                else
                    b.error("malformed-field-type", std::string("network/0/") + flag,
                            std::string(flag) + " must be true or false");
            }
        }
    }

    if (!b.report.ok()) return {std::nullopt, std::move(b.report)};

    auto result = DocumentBuilder{}.build(doc);
    result.report.warnings.insert(result.report.warnings.begin(), warnings.begin(), warnings.end());
    return result;
}

CsvTables serialize_csv(const NetworkSnapshot& s) {
    const auto& layers = s.layers();
    const auto& nodes = s.nodes();
    auto attribute_columns = [](auto&& range) {
        std::set<std::string> keys;
        for (const auto& item : range)
            for (const auto& [k, v] : item.attributes) keys.insert(k);
        return std::vector<std::string>(keys.begin(), keys.end());
    };
    auto fill_attributes = [](csv::Row& row, const std::vector<std::string>& cols, const Attributes& attrs) {
        for (const auto& c : cols) {
            auto it = attrs.find(c);
            row.push_back(it == attrs.end() ? std::string{} : attribute_text(it->second));
        }
    };

    CsvTables out;
    {
        csv::Table t;
        t.header = {"layer_from", "node_from", "layer_to", "node_to", "weight"};
        const bool any_directed = s.directed() || s.directed_interlayer();
        if (any_directed) t.header.push_back("directed");
        for (const auto& e : s.edges()) {
            csv::Row row{layers[e.layer_from].id, nodes[e.node_from].id, layers[e.layer_to].id,
                         nodes[e.node_to].id, csv::format_number(e.weight)};
            if (any_directed) row.push_back(s.edge_directed(e) ? "true" : "false");
            t.rows.push_back(std::move(row));
        }
        out.edges = csv::write(t);
    }
    {
        csv::Table t;
        const auto attrs = attribute_columns(layers);
        t.header = {"layer_id", "name", "latitude", "longitude", "bipartite"};
        t.header.insert(t.header.end(), attrs.begin(), attrs.end());
        for (const auto& l : layers) {
            csv::Row row{l.id, l.display_name,
                         l.has_coordinates() ? csv::format_number(*l.latitude) : std::string{},
                         l.has_coordinates() ? csv::format_number(*l.longitude) : std::string{},
                         l.bipartite ? "true" : "false"};
            fill_attributes(row, attrs, l.attributes);
            t.rows.push_back(std::move(row));
        }
        out.layers = csv::write(t);
    }
    {
        csv::Table t;
        const auto attrs = attribute_columns(nodes);
        t.header = {"node_id", "node_type"};
        t.header.insert(t.header.end(), attrs.begin(), attrs.end());
        for (const auto& n : nodes) {
            csv::Row row{n.id, n.node_type.value_or("")};
            fill_attributes(row, attrs, n.attributes);
            t.rows.push_back(std::move(row));
        }
        out.nodes = csv::write(t);
    }
    {
        csv::Table t;
        const auto attrs = attribute_columns(s.state_nodes());
        t.header = {"layer_id", "node_id"};
        t.header.insert(t.header.end(), attrs.begin(), attrs.end());
        for (const auto& sn : s.state_nodes()) {
            csv::Row row{layers[sn.layer].id, nodes[sn.node].id};
            fill_attributes(row, attrs, sn.attributes);
            t.rows.push_back(std::move(row));
        }
        out.state_nodes = csv::write(t);
    }
    {
        csv::Table t;
        t.header = {"directed", "directed_interlayer"};
        t.rows.push_back({s.directed() ? "true" : "false", s.directed_interlayer() ? "true" : "false"});
        out.network = csv::write(t);
    }
    return out;
}

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

IngestResult load_network_file(const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    auto text = read_file(p);
    if (!text) throw Error("io-error", "cannot read " + path);
    if (p.extension() == ".csv") {
        CsvTables tables;
        tables.edges = std::move(*text);
        const auto stem = p.parent_path() / p.stem();
        tables.layers = read_file(stem.string() + ".layers.csv");
        tables.nodes = read_file(stem.string() + ".nodes.csv");
        tables.state_nodes = read_file(stem.string() + ".state_nodes.csv");
        tables.network = read_file(stem.string() + ".network.csv");
        return parse_csv(tables);
    }
    return parse_json(*text);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("io-error", "cannot write " + path.string());
}

}  // namespace

void save_network_file(const NetworkSnapshot& snapshot, const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (p.extension() != ".csv") {
        write_file(p, serialize_json(snapshot) + "\n");
        return;
    }
    const auto tables = serialize_csv(snapshot);
    const auto stem = (p.parent_path() / p.stem()).string();
    write_file(p, tables.edges);
    write_file(stem + ".layers.csv", *tables.layers);
    write_file(stem + ".nodes.csv", *tables.nodes);
    write_file(stem + ".state_nodes.csv", *tables.state_nodes);
    write_file(stem + ".network.csv", *tables.network);
}

}  // namespace mln
