#include "mln/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mln/error.hpp"
#include "mln/ingest.hpp"
#include "mln/layout.hpp"
#include "mln/meta.hpp"
#include "mln/report.hpp"
#include "mln/service.hpp"
#include "mln/session.hpp"
#include "mln/version.hpp"
#include "mln/view.hpp"

#ifndef MLNET_DEFAULT_WEB_ROOT
#define MLNET_DEFAULT_WEB_ROOT ""
#endif

namespace mln {

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

std::string dump(const report::Json& j) { return j.dump(2) + "\n"; }

/// Loads a network or prints the validation report to err and returns null.
std::optional<NetworkSnapshot> load(const std::string& path, std::ostream& err) {
    auto result = load_network_file(path);
    if (!result.ok()) {
        err << dump(report::to_json(result.report));
        return std::nullopt;
    }
    return std::move(result.snapshot);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io-error", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int serve(const service::ServerOptions& options, const std::string& network, bool open_browser, std::ostream& out,
          std::ostream& err) {
    service::Api api;
    if (!network.empty()) {
        auto s = load(network, err);
        if (!s) return 1;
        api.replace(std::make_shared<const NetworkSnapshot>(std::move(*s)));
    }
    service::Server server(api, options);
    const int port = server.start();
    const auto url = "http://" + options.host + ":" + std::to_string(port) + "/";
    out << "serving " << url << std::endl;
    if (open_browser) {
#if defined(__APPLE__)
        const std::string cmd = "open '" + url + "' >/dev/null 2>&1 &";
#else
        const std::string cmd = "xdg-open '" + url + "' >/dev/null 2>&1 &";
#endif
        if (std::system(cmd.c_str()) != 0) err << "could not open a browser; visit " << url << "\n";
    }
    g_interrupted = false;
    auto previous_int = std::signal(SIGINT, on_signal);
    auto previous_term = std::signal(SIGTERM, on_signal);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    server.stop();
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multilayer network engine", "mlnet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string file, second, third, format = "json", mode = "sum";
    std::size_t bins = kDefaultBins;
    std::uint64_t seed = 1;
    double width = 1200.0, height = 800.0;
    bool exported = false;

    auto* validate = app.add_subcommand("validate", "Validate a network file and print the report");
    validate->add_option("file", file, "Network file (.json or .csv)")->required();

    auto* stats = app.add_subcommand("stats", "Print the full metrics bundle");
    stats->add_option("file", file)->required();
    stats->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    stats->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);

    auto* meta = app.add_subcommand("meta", "Print the layer-aggregated meta-network");
    meta->add_option("file", file)->required();
    meta->add_option("--mode", mode)->check(
        CLI::IsMember({"union", "count", "sum", "union_edges", "sum_occurrence", "sum_weights"}));

    auto* layout = app.add_subcommand("layout", "Print stack, layer-graph and grid layouts");
    layout->add_option("file", file)->required();
    layout->add_option("--seed", seed);
    layout->add_option("--width", width)->check(CLI::PositiveNumber);
    layout->add_option("--height", height)->check(CLI::PositiveNumber);

    auto* convert = app.add_subcommand("convert", "Convert between CSV and JSON (by extension)");
    convert->add_option("input", file)->required();
    convert->add_option("output", second)->required();

    auto* compare = app.add_subcommand("compare", "Compare two layers");
    compare->add_option("file", file)->required();
    compare->add_option("a", second, "First layer id")->required();
    compare->add_option("b", third, "Second layer id")->required();
    compare->add_option("--bins", bins)->check(CLI::PositiveNumber);

    auto* select_cmd = app.add_subcommand("select", "Print the selection payload of a node");
    select_cmd->add_option("file", file)->required();
    select_cmd->add_option("node", second)->required();

    auto* view = app.add_subcommand("view", "Print the filtered view of a saved session");
    view->add_option("session", file)->required();
    view->add_flag("--export", exported, "Print drawing primitives instead");

    service::ServerOptions server_options;
    server_options.port = service::default_port();
    server_options.root = MLNET_DEFAULT_WEB_ROOT;
    bool open_browser = false;
    auto* serve_cmd = app.add_subcommand("serve", "Start the local HTTP service");
    serve_cmd->add_option("--port", server_options.port, "Port (default $MIRA_PORT or 8787)")
        ->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", server_options.host);
    serve_cmd->add_option("--root", server_options.root, "Static asset directory");
    serve_cmd->add_option("--network", file, "Network to load at startup");
    serve_cmd->add_flag("--open", open_browser, "Open a browser");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) {
            IngestResult result;
            try {
                result = load_network_file(file);
            } catch (const Error& e) {
                result.report.errors.push_back({e.code(), "", e.what()});
            }
            out << dump(report::to_json(result.report));
            return result.ok() ? 0 : 1;
        }
        if (view->parsed()) {
            const auto session = load_session(read_text(file));
            if (exported)
                out << dump(report::export_view(*session.network, session.view));
            else
                out << dump(report::to_json(*session.network, apply_filters(*session.network, session.view)));
            return 0;
        }
        if (serve_cmd->parsed()) return serve(server_options, file, open_browser, out, err);

        auto s = load(file, err);
        if (!s) return 1;
        if (stats->parsed()) {
            out << (format == "csv" ? report::metrics_csv(*s, bins) : report::metrics_document(*s, bins));
        } else if (meta->parsed()) {
            out << dump(report::to_json(*s, build_meta(*s, *aggregation_from_string(mode))));
        } else if (layout->parsed()) {
            out << report::layout_document(*s, seed, width, height);
        } else if (convert->parsed()) {
            save_network_file(*s, second);
        } else if (compare->parsed()) {
            out << dump(report::to_json(*s, compare_layers(*s, s->layer_index(second), s->layer_index(third), bins)));
        } else if (select_cmd->parsed()) {
            out << dump(report::to_json(*s, select_node(*s, second)));
        }
        return 0;
    } catch (const Error& e) {
        err << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mln
