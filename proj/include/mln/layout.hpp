#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "mln/model.hpp"

namespace mln {

// ---------------------------------------------------------------------------
// Within-layer layouts

enum class LayoutKind { force, bipartite_columns, circular };
std::string_view to_string(LayoutKind k);

inline constexpr std::size_t kUnionLayer = std::numeric_limits<std::size_t>::max();
inline constexpr int kForceIterations = 300;
inline constexpr double kBipartiteColumnA = 0.15;
inline constexpr double kBipartiteColumnB = 0.85;

/// Node positions in the unit square for one layer (or for the union graph
/// shared by the grid cells, with layer == kUnionLayer).
struct LayerLocalLayout {
    std::size_t layer = 0;
    LayoutKind kind = LayoutKind::force;
    std::vector<std::size_t> nodes;  // ascending physical node indices
    Eigen::Matrix2Xd positions;      // column i belongs to nodes[i]

    std::optional<Eigen::Vector2d> position_of(std::size_t node) const;
};

/// Deterministic in (snapshot, layer, seed). Bipartite layers get two columns
/// with set A at x=0.15 and set B at x=0.85, each evenly spaced at
/// y = (k+1)/(n+1). Edgeless layers are placed on a circle. Otherwise a seeded
/// Fruchterman-Reingold simulation runs for a fixed 300 iterations with linear
/// cooling and the result is scaled uniformly into [0.05, 0.95]^2.
LayerLocalLayout layout_layer(const NetworkSnapshot& s, std::size_t layer, std::uint64_t seed);

/// One layout over every present node and the union of all intralayer edges,
/// so that a node sits at the same spot in every grid cell.
LayerLocalLayout layout_union(const NetworkSnapshot& s, std::uint64_t seed);

std::vector<LayerLocalLayout> layout_all_layers(const NetworkSnapshot& s, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Oblique stack projection

/// Per-layer affine map from the unit layer plane to screen space:
///   screen(x, y, a) = (x*S + a*g*shear_x, y*S*c + a*g*shear_y)
/// where S is the scale, c the vertical compression and g the layer gap.
template <typename Scalar = double>
struct StackParams {
    Scalar scale = Scalar(1);
    Scalar compression = Scalar(0.5);
    Scalar layer_gap = Scalar(1);
    Scalar shear_x = Scalar(0.35);
    Scalar shear_y = Scalar(-0.55);

    /// Defaults for a given scale: shear (0.35 S, -0.55 S), compression 0.5.
    static StackParams for_scale(Scalar s) {
        StackParams p;
        p.scale = s;
        p.shear_x = Scalar(0.35) * s;
        p.shear_y = Scalar(-0.55) * s;
        return p;
    }

    Eigen::Transform<Scalar, 2, Eigen::Affine> transform(Eigen::Index layer) const {
        Eigen::Transform<Scalar, 2, Eigen::Affine> t = Eigen::Transform<Scalar, 2, Eigen::Affine>::Identity();
        t.translate(Eigen::Matrix<Scalar, 2, 1>(shear_x, shear_y) * (layer_gap * Scalar(layer)));
        t.scale(Eigen::Matrix<Scalar, 2, 1>(scale, scale * compression));
        return t;
    }

    bool operator==(const StackParams&) const = default;
};

/// Applies the layer transform to a 2xN block of plane coordinates.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, 2, Eigen::Dynamic> project_points(const StackParams<Scalar>& params, Eigen::Index layer,
                                                        const Eigen::MatrixBase<Derived>& plane) {
    return params.transform(layer) * plane;
}

struct StackProjection {
    StackParams<double> params;
    Eigen::Matrix2Xd screen;  // column per state node, snapshot order
};

/// Screen coordinates of every state node. Layer index follows the snapshot
/// layer order, so index 0 is the bottom of the stack.
StackProjection project_stack(const NetworkSnapshot& s, const std::vector<LayerLocalLayout>& layouts,
                              const StackParams<double>& params = {});

// ---------------------------------------------------------------------------
// Layer-level layouts

enum class LayerGraphMode { force, geographic };
enum class SharedNormalization { raw, jaccard };
std::string_view to_string(LayerGraphMode m);

struct LayerGraphWeights {
    double shared = 1.0;
    double coupling = 1.0;
    SharedNormalization normalization = SharedNormalization::raw;

    bool operator==(const LayerGraphWeights&) const = default;
};

struct LayerLink {
    std::size_t a = 0;
    std::size_t b = 0;
    int shared_nodes = 0;
    int coupling_count = 0;
    double coupling_weight = 0.0;
    double attraction = 0.0;
};

struct LayerGraphLayout {
    LayerGraphMode mode = LayerGraphMode::force;
    Eigen::Matrix2Xd positions;  // column per layer
    Eigen::Matrix2Xd jitter;     // offsets already included in positions
    std::vector<LayerLink> links;
    // Geographic mode: viewport = (world - center) * scale + (0.5, 0.5).
    Eigen::Vector2d center = Eigen::Vector2d::Constant(0.5);
    double scale = 1.0;
    double zoom = 0.0;

    Eigen::Vector2d world_to_view(const Eigen::Vector2d& world) const {
        return (world - center) * scale + Eigen::Vector2d::Constant(0.5);
    }
};

/// Pair statistics between layers plus the attraction coefficient
///   W = w_shared * shared' + w_coupling * coupling'
/// where shared' is the shared-node count over its maximum (or the node
/// Jaccard) and coupling' the interlayer weight over its maximum.
std::vector<LayerLink> layer_links(const NetworkSnapshot& s, const LayerGraphWeights& weights);

/// Force system on layer bubbles: springs of stiffness W pulling pairs
/// together, a uniform 1/d repulsion and a weak pull to the centre (0.5, 0.5).
struct LayerForceModel {
    double repulsion = 0.02;
    double gravity = 0.1;
    int iterations = 600;
};

/// Net force on each bubble; zero at equilibrium.
Eigen::Matrix2Xd layer_graph_forces(const Eigen::Matrix2Xd& positions, const Eigen::MatrixXd& attraction,
                                    const LayerForceModel& model = {});

LayerGraphLayout layout_layer_graph(const NetworkSnapshot& s, std::uint64_t seed,
                                    const LayerGraphWeights& weights = {}, const LayerForceModel& model = {});

/// Web-Mercator world coordinates in [0,1]^2; (0,0) lat/lon maps to (0.5, 0.5).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> mercator(Scalar latitude, Scalar longitude) {
    constexpr Scalar kMaxLat = Scalar(85.05112878);
    constexpr Scalar pi = Scalar(3.14159265358979323846);
    const Scalar lat = std::clamp(latitude, -kMaxLat, kMaxLat) * pi / Scalar(180);
    const Scalar x = (longitude + Scalar(180)) / Scalar(360);
    const Scalar y = (Scalar(1) - std::log(std::tan(lat) + Scalar(1) / std::cos(lat)) / pi) / Scalar(2);
    return {x, y};
}

inline constexpr double kGeoMargin = 0.10;
inline constexpr double kGeoJitterRadius = 0.02;

/// Pins bubbles at the Mercator projection of each layer's coordinates, fitted
/// into the unit viewport with a 10% margin. Layers sharing exact coordinates
/// are spread on a golden-angle sequence at radius kGeoJitterRadius. Throws
/// mln::Error("missing-coordinates") naming every layer without coordinates.
LayerGraphLayout layout_geographic(const NetworkSnapshot& s);

/// Geographic when every layer has coordinates, force-directed otherwise.
LayerGraphLayout layout_layer_view(const NetworkSnapshot& s, std::uint64_t seed,
                                   const LayerGraphWeights& weights = {});

// ---------------------------------------------------------------------------
// Grid

struct GridCell {
    std::size_t layer = 0;
    double x = 0, y = 0, width = 0, height = 0;
};

struct GridLayout {
    std::size_t columns = 0;
    std::size_t rows = 0;
    std::vector<GridCell> cells;  // canonical layer order, row-major
};

/// ceil(sqrt(L)) columns and as few rows as fit L equal cells.
GridLayout layout_grid(std::size_t layer_count, double width, double height);

}  // namespace mln
