#include "mln/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "mln/error.hpp"
#include "mln/metrics.hpp"

namespace mln {

std::string_view to_string(LayoutKind k) {
    switch (k) {
        case LayoutKind::bipartite_columns: return "bipartite_columns";
        case LayoutKind::circular: return "circular";
        default: return "force";
    }
}

std::string_view to_string(LayerGraphMode m) { return m == LayerGraphMode::geographic ? "geographic" : "force"; }

std::optional<Eigen::Vector2d> LayerLocalLayout::position_of(std::size_t node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) return std::nullopt;
    return positions.col(it - nodes.begin());
}

namespace {

// Uniform [0,1) from the raw engine output; std::uniform_real_distribution is
// not specified bit-for-bit across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Eigen::Matrix2Xd random_positions(std::size_t n, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    Eigen::Matrix2Xd p(2, static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < p.cols(); ++i) {
        p(0, i) = lo + (hi - lo) * unit(rng);
        p(1, i) = lo + (hi - lo) * unit(rng);
    }
    return p;
}

// Uniform scaling of the point cloud into [0.05, 0.95]^2, centred.
void fit_unit_square(Eigen::Matrix2Xd& p) {
    if (p.cols() == 0) return;
    const Eigen::Vector2d lo = p.rowwise().minCoeff();
    const Eigen::Vector2d hi = p.rowwise().maxCoeff();
    const double span = (hi - lo).maxCoeff();
    const Eigen::Vector2d mid = (lo + hi) / 2.0;
    if (span <= 0.0) {
        p.colwise() = Eigen::Vector2d::Constant(0.5);
        return;
    }
    p = ((p.colwise() - mid) * (0.9 / span)).colwise() + Eigen::Vector2d::Constant(0.5);
}

Eigen::Matrix2Xd fruchterman_reingold(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                      std::uint64_t seed) {
    Eigen::Matrix2Xd p = random_positions(n, seed, 0.0, 1.0);
    const double k = std::sqrt(1.0 / static_cast<double>(n));
    const double k2 = k * k;
    const Eigen::Vector2d centre = Eigen::Vector2d::Constant(0.5);
    Eigen::Matrix2Xd disp(2, p.cols());
    for (int it = 0; it < kForceIterations; ++it) {
        const double temperature = 0.1 * (1.0 - static_cast<double>(it) / kForceIterations);
        disp.setZero();
        for (Eigen::Index i = 0; i < p.cols(); ++i) {
            for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
                Eigen::Vector2d delta = p.col(i) - p.col(j);
                double d2 = delta.squaredNorm();
                if (d2 < 1e-12) {
                    // Coincident points: push apart along a fixed axis.
                    delta = Eigen::Vector2d(1e-6 * static_cast<double>(j - i), 1e-6);
                    d2 = delta.squaredNorm();
                }
                const Eigen::Vector2d f = delta * (k2 / d2);
                disp.col(i) += f;
                disp.col(j) -= f;
            }
        }
        for (const auto& [u, v] : edges) {
            const auto a = static_cast<Eigen::Index>(u), b = static_cast<Eigen::Index>(v);
            const Eigen::Vector2d delta = p.col(a) - p.col(b);
            const Eigen::Vector2d f = delta * (delta.norm() / k);
            disp.col(a) -= f;
            disp.col(b) += f;
        }
        // Weak gravity keeps disconnected components from drifting apart.
        disp -= (p.colwise() - centre) * (0.1 / k);
        for (Eigen::Index i = 0; i < p.cols(); ++i) {
            const double len = disp.col(i).norm();
            if (len > 0.0) p.col(i) += disp.col(i) * (std::min(len, temperature) / len);
        }
    }
    fit_unit_square(p);
    return p;
}

LayerLocalLayout columns_layout(const std::vector<std::size_t>& nodes, const std::vector<BipartiteSet>& sets) {
    LayerLocalLayout out;
    out.kind = LayoutKind::bipartite_columns;
    out.nodes = nodes;
    out.positions.resize(2, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t s = 0; s < sets.size() && s < 2; ++s) {
        const double x = s == 0 ? kBipartiteColumnA : kBipartiteColumnB;
        const auto& members = sets[s].nodes;
        const double n = static_cast<double>(members.size());
        for (std::size_t k = 0; k < members.size(); ++k) {
            auto it = std::lower_bound(out.nodes.begin(), out.nodes.end(), members[k]);
            const auto col = it - out.nodes.begin();
            out.positions(0, col) = x;
            out.positions(1, col) = static_cast<double>(k + 1) / (n + 1.0);
        }
    }
    return out;
}

LayerLocalLayout graph_layout(std::vector<std::size_t> nodes, const std::vector<std::pair<std::size_t, std::size_t>>& node_edges,
                              std::uint64_t seed) {
    LayerLocalLayout out;
    out.nodes = std::move(nodes);
    const std::size_t n = out.nodes.size();
    if (n == 0) {
        out.positions.resize(2, 0);
        return out;
    }
    if (n == 1) {
        out.positions = Eigen::Matrix2Xd::Constant(2, 1, 0.5);
        return out;
    }
    if (node_edges.empty()) {
        out.kind = LayoutKind::circular;
        out.positions.resize(2, static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            out.positions(0, static_cast<Eigen::Index>(k)) = 0.5 + 0.45 * std::cos(angle);
            out.positions(1, static_cast<Eigen::Index>(k)) = 0.5 + 0.45 * std::sin(angle);
        }
        return out;
    }
    // Map node indices to columns.
    std::vector<std::pair<std::size_t, std::size_t>> local;
    local.reserve(node_edges.size());
    auto col = [&](std::size_t v) {
        return static_cast<std::size_t>(std::lower_bound(out.nodes.begin(), out.nodes.end(), v) - out.nodes.begin());
    };
    for (const auto& [u, v] : node_edges) local.emplace_back(col(u), col(v));
    out.kind = LayoutKind::force;
    out.positions = fruchterman_reingold(n, local, seed);
    return out;
}

}  // namespace

LayerLocalLayout layout_layer(const NetworkSnapshot& s, std::size_t layer, std::uint64_t seed) {
    const auto members = s.members(layer);
    std::vector<std::size_t> nodes(members.begin(), members.end());
    LayerLocalLayout out;
    if (s.layers()[layer].bipartite) {
        out = columns_layout(nodes, s.bipartite_sets(layer));
    } else {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (auto e : s.layer_edges(layer)) edges.emplace_back(s.edges()[e].node_from, s.edges()[e].node_to);
        out = graph_layout(std::move(nodes), edges, seed);
    }
    out.layer = layer;
    return out;
}

LayerLocalLayout layout_union(const NetworkSnapshot& s, std::uint64_t seed) {
    std::vector<std::size_t> nodes;
    for (std::size_t v = 0; v < s.node_count(); ++v)
        if (s.participation(v) > 0) nodes.push_back(v);

    bool all_bipartite = true;
    std::map<std::string, std::set<std::size_t>> labels;
    for (std::size_t a = 0; a < s.layer_count(); ++a) {
        all_bipartite = all_bipartite && s.layers()[a].bipartite;
        for (const auto& set : s.bipartite_sets(a)) labels[set.label].insert(set.nodes.begin(), set.nodes.end());
    }
    LayerLocalLayout out;
    if (all_bipartite && labels.size() <= 2) {
        std::vector<BipartiteSet> sets;
        for (auto& [label, members] : labels) sets.push_back({label, {members.begin(), members.end()}});
        out = columns_layout(nodes, sets);
    } else {
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t a = 0; a < s.layer_count(); ++a)
            for (auto e : s.layer_edges(a)) {
                auto u = s.edges()[e].node_from, v = s.edges()[e].node_to;
                if (v < u) std::swap(u, v);
                edges.emplace(u, v);
            }
        out = graph_layout(std::move(nodes), {edges.begin(), edges.end()}, seed);
    }
    out.layer = kUnionLayer;
    return out;
}

std::vector<LayerLocalLayout> layout_all_layers(const NetworkSnapshot& s, std::uint64_t seed) {
    std::vector<LayerLocalLayout> out;
    out.reserve(s.layer_count());
    for (std::size_t a = 0; a < s.layer_count(); ++a) out.push_back(layout_layer(s, a, seed));
    return out;
}

StackProjection project_stack(const NetworkSnapshot& s, const std::vector<LayerLocalLayout>& layouts,
                              const StackParams<double>& params) {
    if (layouts.size() != s.layer_count())
        throw Error("layout-mismatch", "expected one layout per layer");
    StackProjection out;
    out.params = params;
    out.screen.resize(2, static_cast<Eigen::Index>(s.state_nodes().size()));
    for (std::size_t a = 0; a < layouts.size(); ++a) {
        const auto& layout = layouts[a];
        const Eigen::Matrix2Xd screen = project_points(params, static_cast<Eigen::Index>(a), layout.positions);
        for (std::size_t k = 0; k < layout.nodes.size(); ++k) {
            const auto st = s.state_index(a, layout.nodes[k]);
            out.screen.col(static_cast<Eigen::Index>(st)) = screen.col(static_cast<Eigen::Index>(k));
        }
    }
    return out;
}

std::vector<LayerLink> layer_links(const NetworkSnapshot& s, const LayerGraphWeights& weights) {
    const std::size_t L = s.layer_count();
    const Eigen::MatrixXi shared = s.presence().transpose() * s.presence();
    Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    Eigen::MatrixXi coupling_count = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    for (auto idx : s.interlayer_edges()) {
        const auto& e = s.edges()[idx];
        auto a = static_cast<Eigen::Index>(std::min(e.layer_from, e.layer_to));
        auto b = static_cast<Eigen::Index>(std::max(e.layer_from, e.layer_to));
        coupling(a, b) += e.weight;
        coupling_count(a, b) += 1;
    }

    std::vector<LayerLink> links;
    double max_shared = 0.0, max_coupling = 0.0;
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = a + 1; b < L; ++b) {
            const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
            LayerLink link{a, b, shared(ia, ib), coupling_count(ia, ib), coupling(ia, ib), 0.0};
            max_shared = std::max(max_shared, static_cast<double>(link.shared_nodes));
            max_coupling = std::max(max_coupling, link.coupling_weight);
            links.push_back(link);
        }
    for (auto& link : links) {
        double shared_term = 0.0;
        if (weights.normalization == SharedNormalization::jaccard)
            shared_term = jaccard_nodes(s, link.a, link.b).value_or(0.0);
        else if (max_shared > 0.0)
            shared_term = link.shared_nodes / max_shared;
        const double coupling_term = max_coupling > 0.0 ? link.coupling_weight / max_coupling : 0.0;
        link.attraction = weights.shared * shared_term + weights.coupling * coupling_term;
    }
    return links;
}

Eigen::Matrix2Xd layer_graph_forces(const Eigen::Matrix2Xd& p, const Eigen::MatrixXd& w, const LayerForceModel& model) {
    Eigen::Matrix2Xd f = -(p.colwise() - Eigen::Vector2d::Constant(0.5)) * model.gravity;
    for (Eigen::Index i = 0; i < p.cols(); ++i)
        for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
            const Eigen::Vector2d delta = p.col(i) - p.col(j);
            const double d2 = std::max(delta.squaredNorm(), 1e-12);
            const Eigen::Vector2d pair = delta * (model.repulsion / d2 - w(i, j));
            f.col(i) += pair;
            f.col(j) -= pair;
        }
    return f;
}

LayerGraphLayout layout_layer_graph(const NetworkSnapshot& s, std::uint64_t seed, const LayerGraphWeights& weights,
                                    const LayerForceModel& model) {
    LayerGraphLayout out;
    out.mode = LayerGraphMode::force;
    out.links = layer_links(s, weights);
    const auto L = static_cast<Eigen::Index>(s.layer_count());
    out.jitter = Eigen::Matrix2Xd::Zero(2, L);
    if (L == 1) {
        out.positions = Eigen::Matrix2Xd::Constant(2, 1, 0.5);
        return out;
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(L, L);
    for (const auto& link : out.links) {
        const auto a = static_cast<Eigen::Index>(link.a), b = static_cast<Eigen::Index>(link.b);
        w(a, b) = w(b, a) = link.attraction;
    }

    // Diagonally preconditioned descent on the energy
    //   sum_pairs (W d^2 / 2 - r ln d) + g/2 sum |p - c|^2,
    // with each step scaled by the inverse of a bubble's local stiffness.
    Eigen::Matrix2Xd p = random_positions(static_cast<std::size_t>(L), seed, 0.25, 0.75);
    for (int it = 0; it < model.iterations; ++it) {
        const Eigen::Matrix2Xd f = layer_graph_forces(p, w, model);
        for (Eigen::Index i = 0; i < L; ++i) {
            double stiffness = model.gravity;
            for (Eigen::Index j = 0; j < L; ++j) {
                if (j == i) continue;
                const double d2 = std::max((p.col(i) - p.col(j)).squaredNorm(), 1e-12);
                stiffness += w(i, j) + model.repulsion / d2;
            }
            Eigen::Vector2d step = f.col(i) / stiffness;
            const double len = step.norm();
            if (len > 0.1) step *= 0.1 / len;
            p.col(i) += step;
        }
    }
    out.positions = p;
    return out;
}

LayerGraphLayout layout_geographic(const NetworkSnapshot& s) {
    std::string missing;
    for (const auto& layer : s.layers())
        if (!layer.has_coordinates()) missing += (missing.empty() ? "" : ", ") + layer.id;
    if (!missing.empty()) throw Error("missing-coordinates", "layers without latitude/longitude: " + missing);

    LayerGraphLayout out;
    out.mode = LayerGraphMode::geographic;
    out.links = layer_links(s, {});
    const auto L = static_cast<Eigen::Index>(s.layer_count());
    Eigen::Matrix2Xd world(2, L);
    for (Eigen::Index a = 0; a < L; ++a) {
        const auto& layer = s.layers()[static_cast<std::size_t>(a)];
        world.col(a) = mercator(*layer.latitude, *layer.longitude);
    }
    const Eigen::Vector2d lo = world.rowwise().minCoeff();
    const Eigen::Vector2d hi = world.rowwise().maxCoeff();
    const double span = (hi - lo).maxCoeff();
    // A single site (or all sites coincident) gets a fixed street-level zoom.
    constexpr double kMaxScale = 1 << 14;
    out.center = (lo + hi) / 2.0;
    out.scale = span > 0.0 ? std::min((1.0 - 2.0 * kGeoMargin) / span, kMaxScale) : kMaxScale;
    out.zoom = std::log2(out.scale);

    out.positions.resize(2, L);
    for (Eigen::Index a = 0; a < L; ++a) out.positions.col(a) = out.world_to_view(world.col(a));

    out.jitter = Eigen::Matrix2Xd::Zero(2, L);
    std::map<std::pair<double, double>, std::vector<Eigen::Index>> sites;
    for (Eigen::Index a = 0; a < L; ++a) {
        const auto& layer = s.layers()[static_cast<std::size_t>(a)];
        sites[{*layer.latitude, *layer.longitude}].push_back(a);
    }
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (const auto& [site, members] : sites) {
        if (members.size() < 2) continue;
        for (std::size_t m = 0; m < members.size(); ++m) {
            const double angle = golden * static_cast<double>(m);
            out.jitter.col(members[m]) = kGeoJitterRadius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
        }
    }
    out.positions += out.jitter;
    return out;
}

LayerGraphLayout layout_layer_view(const NetworkSnapshot& s, std::uint64_t seed, const LayerGraphWeights& weights) {
    const bool geographic = std::all_of(s.layers().begin(), s.layers().end(),
                                        [](const LayerDef& l) { return l.has_coordinates(); });
    if (geographic) return layout_geographic(s);
    return layout_layer_graph(s, seed, weights);
}

GridLayout layout_grid(std::size_t layer_count, double width, double height) {
    GridLayout grid;
    if (layer_count == 0) return grid;
    grid.columns = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(layer_count))));
    // Guard against sqrt rounding for perfect squares.
    while (grid.columns * grid.columns < layer_count) ++grid.columns;
    while (grid.columns > 1 && (grid.columns - 1) * (grid.columns - 1) >= layer_count) --grid.columns;
    grid.rows = (layer_count + grid.columns - 1) / grid.columns;
    const double cw = width / static_cast<double>(grid.columns);
    const double ch = height / static_cast<double>(grid.rows);
    for (std::size_t a = 0; a < layer_count; ++a) {
        const auto col = a % grid.columns;
        const auto row = a / grid.columns;
        grid.cells.push_back({a, static_cast<double>(col) * cw, static_cast<double>(row) * ch, cw, ch});
    }
    return grid;
}

}  // namespace mln
