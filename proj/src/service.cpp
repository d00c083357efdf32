#include "mln/service.hpp"

#include <charconv>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mln/error.hpp"
#include "mln/ingest.hpp"
#include "mln/layout.hpp"
#include "mln/meta.hpp"
#include "mln/report.hpp"
#include "mln/version.hpp"
#include "mln/view.hpp"

namespace mln::service {

namespace {

Response json_response(const report::Json& j, int status = 200) { return {status, "application/json", j.dump(2) + "\n"}; }

Response error_response(int status, std::string_view code, std::string_view message) {
    report::Json j;
    j["error"] = {{"code", code}, {"message", message}};
    return json_response(j, status);
}

int status_for(const std::string& code) {
    if (code.rfind("unknown-", 0) == 0) return 404;
    if (code == "version-mismatch") return 409;
    if (code == "invalid-view-state" || code == "invalid-parameter" || code == "direction-mismatch") return 400;
    return 422;
}

std::optional<std::string_view> param(const Query& q, std::string_view key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return std::string_view(it->second);
}

template <typename T>
T integer_param(const Query& q, std::string_view key, T fallback) {
    auto v = param(q, key);
    if (!v) return fallback;
    T out{};
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size())
        throw Error("invalid-parameter", "query parameter '" + std::string(key) + "' must be a non-negative integer");
    return out;
}

nlohmann::json parse_body(std::string_view body) {
    try {
        return nlohmann::json::parse(body.begin(), body.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("invalid-json", e.what());
    }
}

}  // namespace

int default_port() {
    if (const char* env = std::getenv("MIRA_PORT")) {
        const std::string_view v(env);
        int port = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), port);
        if (ec == std::errc{} && ptr == v.data() + v.size() && port > 0 && port < 65536) return port;
    }
    return kDefaultPort;
}

Api::Api(std::shared_ptr<const NetworkSnapshot> network) { state_.network = std::move(network); }

std::shared_ptr<const NetworkSnapshot> Api::network() const {
    std::lock_guard lock(mutex_);
    return state_.network;
}

ViewState Api::view() const {
    std::lock_guard lock(mutex_);
    return state_.view;
}

Api::State Api::state() const {
    std::lock_guard lock(mutex_);
    return state_;
}

void Api::replace(std::shared_ptr<const NetworkSnapshot> network, ViewState view) {
    std::lock_guard lock(mutex_);
    state_.network = std::move(network);
    state_.view = std::move(view);
}

std::string Api::metrics(const std::shared_ptr<const NetworkSnapshot>& network, std::size_t bins) {
    {
        std::lock_guard lock(cache_mutex_);
        if (cached_network_ == network && cached_bins_ == bins) return cached_metrics_;
    }
    auto doc = report::metrics_document(*network, bins);
    std::lock_guard lock(cache_mutex_);
    cached_network_ = network;
    cached_bins_ = bins;
    cached_metrics_ = doc;
    return doc;
}

Response Api::dispatch(std::string_view method, std::string_view path, const Query& query, std::string_view body) {
    try {
        const bool get = method == "GET", post = method == "POST";
        if (path == "/api/health" && get)
            return json_response({{"status", "ok"}, {"version", kVersion}});

        if (path == "/api/network" && post) {
            auto result = parse_json(body);
            const auto rep = report::to_json(result.report);
            if (!result.ok()) return json_response(rep, 422);
            replace(std::make_shared<const NetworkSnapshot>(std::move(*result.snapshot)));
            return json_response(rep);
        }

        if (path == "/api/session" && post) {
            auto session = load_session(body);
            replace(session.network, session.view);
            return json_response({{"status", "ok"}, {"format_version", session.format_version}});
        }

        const auto current = state();
        if (!current.network)
            return error_response(409, "no-network", "no network loaded");
        const auto& s = current.network;

        if (path == "/api/network" && get) return {200, "application/json", serialize_json(*s) + "\n"};

        if (path == "/api/metrics" && get) {
            const auto bins = integer_param<std::size_t>(query, "bins", kDefaultBins);
            if (bins == 0) throw Error("invalid-parameter", "bins must be positive");
            if (param(query, "format") == std::optional<std::string_view>("csv"))
                return {200, "text/csv", report::metrics_csv(*s, bins)};
            return {200, "application/json", metrics(s, bins)};
        }

        if (path == "/api/meta" && get) {
            const auto name = param(query, "mode").value_or("sum_weights");
            const auto mode = aggregation_from_string(name);
            if (!mode) throw Error("invalid-parameter", "unknown meta mode '" + std::string(name) + "'");
            return json_response(report::to_json(*s, build_meta(*s, *mode)));
        }

        if (path == "/api/layout/stack" && get) {
            const auto seed = integer_param<std::uint64_t>(query, "seed", current.view.layer_seed);
            const auto layouts = layout_all_layers(*s, seed);
            return json_response(
                report::stack_json(*s, layouts, project_stack(*s, layouts, current.view.projection), seed));
        }

        if (path == "/api/layout/layers" && get) {
            const auto seed = integer_param<std::uint64_t>(query, "seed", current.view.layer_graph_seed);
            const auto mode = param(query, "mode").value_or("auto");
            const auto& w = current.view.layer_graph_weights;
            if (mode == "force") return json_response(report::to_json(*s, layout_layer_graph(*s, seed, w)));
            if (mode == "geo") return json_response(report::to_json(*s, layout_geographic(*s)));
            if (mode == "auto") return json_response(report::to_json(*s, layout_layer_view(*s, seed, w)));
            throw Error("invalid-parameter", "mode must be force, geo or auto");
        }

        if (path == "/api/layout/grid" && get) {
            const auto seed = integer_param<std::uint64_t>(query, "seed", current.view.layer_seed);
            const auto width = integer_param<unsigned>(query, "width", 1200);
            const auto height = integer_param<unsigned>(query, "height", 800);
            auto j = report::to_json(layout_grid(s->layer_count(), width, height));
            j["shared_layout"] = report::local_layout_json(*s, layout_union(*s, seed));
            return json_response(j);
        }

        if (path == "/api/compare" && get) {
            const auto a = param(query, "a"), b = param(query, "b");
            if (!a || !b) throw Error("invalid-parameter", "compare needs a and b");
            const auto bins = integer_param<std::size_t>(query, "bins", kDefaultBins);
            return json_response(
                report::to_json(*s, compare_layers(*s, s->layer_index(*a), s->layer_index(*b), bins)));
        }

        if (path == "/api/view" && post) {
            const auto j = parse_body(body);
            ViewState view = current.view;
            if (j.is_object() && j.contains("filters")) {
                view.filters = report::filters_from_json(j["filters"]);
                if (j.contains("selection")) view.selection = report::selection_from_json(j["selection"]);
            } else {
                view.filters = report::filters_from_json(j);
            }
            const auto filtered = apply_filters(*s, view);
            std::lock_guard lock(mutex_);
            if (state_.network == s) state_.view = view;
            return json_response(report::to_json(*s, filtered));
        }

        if (path == "/api/view" && get) return json_response(report::to_json(*s, apply_filters(*s, current.view)));

        if (path == "/api/select") {
            std::optional<Selection> selection;
            if (get) {
                if (auto node = param(query, "node")) selection = NodeSelection{std::string(*node)};
            } else if (post) {
                selection = report::selection_from_json(parse_body(body));
            } else {
                return error_response(405, "method-not-allowed", "use GET or POST");
            }
            report::Json payload = nullptr;
            if (selection) payload = report::to_json(*s, select(*s, *selection));
            std::lock_guard lock(mutex_);
            if (state_.network == s) state_.view.selection = selection;
            return json_response(payload);
        }

        if (path == "/api/view_state") {
            if (get) return json_response(report::to_json(current.view));
            if (post) {
                auto view = report::view_state_from_json(parse_body(body));
                std::lock_guard lock(mutex_);
                if (state_.network == s) state_.view = view;
                return json_response(report::to_json(view));
            }
        }

        if (path == "/api/session" && get) {
            SessionState session;
            session.network = s;
            session.view = current.view;
            return {200, "application/json", save_session(session)};
        }

        if (path == "/api/export" && (get || post)) {
            ViewState view = current.view;
            if (post && !body.empty()) view = report::view_state_from_json(parse_body(body));
            return json_response(report::export_view(*s, view));
        }

        return error_response(404, "not-found", std::string(method) + " " + std::string(path));
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.code(), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal-error", e.what());
    }
}

struct Server::Impl {
    Api& api;
    ServerOptions options;
    httplib::Server http;
    std::thread thread;
    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;

    Impl(Api& a, ServerOptions o) : api(a), options(std::move(o)) {}
};

Server::Server(Api& api, ServerOptions options) : impl_(std::make_unique<Impl>(api, std::move(options))) {}

Server::~Server() { stop(); }

int Server::start() {
    auto& impl = *impl_;
    if (!impl.options.root.empty()) {
        if (!std::filesystem::is_directory(impl.options.root) ||
            !impl.http.set_mount_point("/", impl.options.root))
            throw Error("asset-path-missing", "static asset directory not found: " + impl.options.root);
    }
    auto handler = [&impl](const httplib::Request& req, httplib::Response& res) {
        Query q;
        for (const auto& [k, v] : req.params) q.emplace(k, v);
        const auto r = impl.api.dispatch(req.method, req.path, q, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    impl.http.Get(R"(/api/.*)", handler);
    impl.http.Post(R"(/api/.*)", handler);
    impl.http.set_payload_max_length(std::size_t{256} << 20);
    // httplib's defaults add SO_REUSEPORT, which would let a second server
    // share a busy port instead of failing.
    impl.http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });

    int port = impl.options.port;
    if (port == 0) {
        port = impl.http.bind_to_any_port(impl.options.host);
        if (port < 0) throw Error("port-in-use", "could not bind any port on " + impl.options.host);
    } else if (!impl.http.bind_to_port(impl.options.host, port)) {
        throw Error("port-in-use", "port " + std::to_string(port) + " is not available on " + impl.options.host);
    }
    impl.thread = std::thread([&impl] { impl.http.listen_after_bind(); });
    impl.http.wait_until_ready();
    return port;
}

void Server::wait() {
    std::unique_lock lock(impl_->mutex);
    impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

void Server::stop() {
    if (!impl_) return;
    impl_->http.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
    {
        std::lock_guard lock(impl_->mutex);
        impl_->stopped = true;
    }
    impl_->stopped_cv.notify_all();
}

}  // namespace mln::service
