#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mln/layout.hpp"
#include "mln/meta.hpp"
#include "mln/model.hpp"
#include "mln/view.hpp"

namespace mln {

inline constexpr int kSessionFormatVersion = 1;
inline constexpr double kDefaultStackScale = 400.0;

struct ViewState {
    Mode active_mode = Mode::network;
    Filters filters;
    std::optional<Selection> selection;
    StackParams<double> projection = StackParams<double>::for_scale(kDefaultStackScale);
    std::uint64_t layer_seed = 1;        // within-layer and grid layouts
    std::uint64_t layer_graph_seed = 1;  // Layer View force layout
    LayerGraphWeights layer_graph_weights;
    Aggregation meta_mode = Aggregation::sum_weights;
    double meta_threshold = 0.0;

    bool operator==(const ViewState& o) const;
};

struct SessionState {
    int format_version = kSessionFormatVersion;
    std::shared_ptr<const NetworkSnapshot> network;
    ViewState view;
};

/// Self-contained envelope {format_version, network, view_state}.
std::string save_session(const SessionState& state, int indent = 2);

/// Throws mln::Error with code version-mismatch for a newer format_version and
/// corrupt-payload for anything that is not a valid session.
SessionState load_session(std::string_view text);

/// Same network (canonical form) and same view state.
bool sessions_equal(const SessionState& a, const SessionState& b);

/// Filters and selection of a view state applied to its network.
FilteredView apply_filters(const NetworkSnapshot& s, const ViewState& view);

}  // namespace mln
