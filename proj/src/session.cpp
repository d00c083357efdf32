#include "mln/session.hpp"

#include <json.hpp>

#include "mln/error.hpp"
#include "mln/ingest.hpp"
#include "mln/report.hpp"

namespace mln {

bool ViewState::operator==(const ViewState& o) const {
    return active_mode == o.active_mode && filters == o.filters && selection == o.selection &&
           projection == o.projection && layer_seed == o.layer_seed && layer_graph_seed == o.layer_graph_seed &&
           layer_graph_weights == o.layer_graph_weights && meta_mode == o.meta_mode &&
           meta_threshold == o.meta_threshold;
}

std::string save_session(const SessionState& state, int indent) {
    if (!state.network) throw Error("corrupt-payload", "session has no network");
    nlohmann::ordered_json j;
    j["format_version"] = state.format_version;
    j["network"] = nlohmann::ordered_json::parse(serialize_json(*state.network, -1));
    j["view_state"] = report::to_json(state.view);
    return j.dump(indent) + "\n";
}

SessionState load_session(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("corrupt-payload", std::string("session is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("corrupt-payload", "session must be a JSON object");
    auto version = j.find("format_version");
    if (version == j.end() || !version->is_number_integer())
        throw Error("corrupt-payload", "format_version missing or not an integer");
    const auto v = version->get<long long>();
    if (v > kSessionFormatVersion)
        throw Error("version-mismatch", "session format_version " + std::to_string(v) + " is newer than supported " +
                                            std::to_string(kSessionFormatVersion));
    if (v < 1) throw Error("corrupt-payload", "format_version must be positive");

    auto network = j.find("network");
    if (network == j.end() || !network->is_object()) throw Error("corrupt-payload", "session has no network object");
    auto parsed = parse_json(network->dump());
    if (!parsed.ok()) {
        const auto& first = parsed.report.errors.front();
        throw Error("corrupt-payload", "embedded network is invalid: " + first.code + " at " + first.path);
    }

    SessionState state;
    state.format_version = static_cast<int>(v);
    state.network = std::make_shared<const NetworkSnapshot>(std::move(*parsed.snapshot));
    auto view = j.find("view_state");
    if (view != j.end()) {
        try {
            state.view = report::view_state_from_json(*view);
        } catch (const Error& e) {
            throw Error("corrupt-payload", std::string("view_state: ") + e.what());
        }
    }
    return state;
}

bool sessions_equal(const SessionState& a, const SessionState& b) {
    if (a.format_version != b.format_version || !(a.view == b.view)) return false;
    if (!a.network || !b.network) return a.network == b.network;
    return semantically_equal(*a.network, *b.network);
}

FilteredView apply_filters(const NetworkSnapshot& s, const ViewState& view) {
    return apply_filters(s, view.filters, view.selection);
}

}  // namespace mln
