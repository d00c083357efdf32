#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mln/ingest.hpp"
#include "mln/layout.hpp"
#include "mln/meta.hpp"
#include "mln/metrics.hpp"
#include "mln/session.hpp"
#include "mln/view.hpp"

namespace mln::report {

using Json = nlohmann::ordered_json;

// Undefined quantities (NaN, empty optionals) are written as null.

Json to_json(const ValidationReport& report);
Json to_json(const NetworkSnapshot& s, const MetricsBundle& bundle);
Json to_json(const NetworkSnapshot& s, const MetaNetwork& meta);
Json to_json(const NetworkSnapshot& s, const SelectionPayload& payload);
Json to_json(const NetworkSnapshot& s, const FilteredView& view);
Json to_json(const NetworkSnapshot& s, const LayerComparison& cmp);
Json to_json(const NetworkSnapshot& s, const LayerGraphLayout& layout);
Json to_json(const GridLayout& grid);
Json stack_json(const NetworkSnapshot& s, const std::vector<LayerLocalLayout>& layouts,
                const StackProjection& projection, std::uint64_t seed);
Json local_layout_json(const NetworkSnapshot& s, const LayerLocalLayout& layout);

/// The canonical metrics document. CLI `stats --format json` and
/// GET /api/metrics both emit exactly this string.
std::string metrics_document(const NetworkSnapshot& s, std::size_t bins = kDefaultBins);

/// Long-form CSV of the same metrics: scope,layer_id,node_id,metric,value.
std::string metrics_csv(const NetworkSnapshot& s, std::size_t bins = kDefaultBins);

/// Stack, layer-graph (force and, when available, geographic) and grid
/// layouts in one document.
std::string layout_document(const NetworkSnapshot& s, std::uint64_t seed, double width = 1200.0,
                            double height = 800.0);

/// Drawing primitives for the current view in stack coordinates: one circle
/// per visible state node and one line per visible edge, each with a dimmed
/// flag. The UI rasterizes this.
Json export_view(const NetworkSnapshot& s, const ViewState& view);

Json to_json(const ViewState& view);
Json to_json(const Filters& filters);
/// Strict readers; throw mln::Error("invalid-view-state").
ViewState view_state_from_json(const nlohmann::json& j);
Filters filters_from_json(const nlohmann::json& j);
std::optional<Selection> selection_from_json(const nlohmann::json& j);

}  // namespace mln::report
