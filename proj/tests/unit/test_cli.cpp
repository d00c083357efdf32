#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "checks.hpp"
#include "mln/cli.hpp"
#include "mln/ingest.hpp"
#include "mln/report.hpp"
#include "mln/service.hpp"
#include "mln/session.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = mln::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string path(const std::string& name) { return (fs::path(MLT_FIXTURES) / name).string(); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("validate") {
    const auto ok = run({"validate", path("valid/minimal.json")});
    CHECK(ok.code == 0);
    CHECK(nlohmann::json::parse(ok.out)["valid"] == true);

    const auto bad = run({"validate", path("invalid/missing_extended.json")});
    CHECK(bad.code == 1);
    const auto report = nlohmann::json::parse(bad.out);
    CHECK(report["valid"] == false);
    CHECK(report["errors"][0]["code"] == "missing-required-array");
    CHECK(report["errors"][0]["path"] == "/extended");

    const auto missing = run({"validate", path("valid/does_not_exist.json")});
    CHECK(missing.code == 1);
    CHECK(nlohmann::json::parse(missing.out)["errors"][0]["code"] == "io-error");
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"stats", path("valid/mixed.json"), "--format", "xml"}).code == 2);
    const auto v = run({"--version"});
    CHECK(v.code == 0);
}

TEST_CASE("stats matches the service metrics body") {
    const auto cli = run({"stats", path("valid/mixed.json")});
    REQUIRE(cli.code == 0);
    mln::service::Api api;
    CHECK(api.dispatch("POST", "/api/network", {}, slurp(path("valid/mixed.json"))).status == 200);
    const auto http = api.dispatch("GET", "/api/metrics", {}, "");
    CHECK(http.status == 200);
    CHECK(http.body == cli.out);

    const auto bins = run({"stats", path("valid/mixed.json"), "--bins", "5"});
    CHECK(api.dispatch("GET", "/api/metrics", {{"bins", "5"}}, "").body == bins.out);

    const auto csv = run({"stats", path("valid/mixed.json"), "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(api.dispatch("GET", "/api/metrics", {{"format", "csv"}}, "").body == csv.out);
    CHECK(csv.out.rfind("scope,", 0) == 0);
}

TEST_CASE("stats on an invalid file reports and fails") {
    const auto r = run({"stats", path("invalid/duplicate_edge_same_order.json")});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(nlohmann::json::parse(r.err)["errors"][0]["code"] == "duplicate-edge");
}

TEST_CASE("meta, layout, compare, select") {
    const auto meta = run({"meta", path("valid/mixed.json"), "--mode", "count"});
    REQUIRE(meta.code == 0);
    CHECK(nlohmann::json::parse(meta.out)["mode"] == "sum_occurrence");

    const auto layout = run({"layout", path("valid/geographic.json"), "--seed", "3"});
    REQUIRE(layout.code == 0);
    const auto lj = nlohmann::json::parse(layout.out);
    CHECK(lj.contains("stack"));
    CHECK(lj["geographic"]["mode"] == "geographic");
    CHECK(lj["grid"]["columns"] == 2);
    CHECK(run({"layout", path("valid/geographic.json"), "--seed", "3"}).out == layout.out);

    const auto cmp = run({"compare", path("valid/mixed.json"), "L1", "L2"});
    REQUIRE(cmp.code == 0);
    CHECK(nlohmann::json::parse(cmp.out)["layer_a"] == "L1");
    const auto unknown = run({"compare", path("valid/mixed.json"), "L1", "nope"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("unknown-layer") != std::string::npos);

    const auto sel = run({"select", path("valid/mixed.json"), "A"});
    REQUIRE(sel.code == 0);
    CHECK(nlohmann::json::parse(sel.out)["node_id"] == "A");
}

TEST_CASE("convert round-trip") {
    const auto dir = fs::temp_directory_path() / "mlt_cli_convert";
    fs::create_directories(dir);
    const auto csv = (dir / "mixed.csv").string();
    const auto json = (dir / "mixed.json").string();
    REQUIRE(run({"convert", path("valid/mixed.json"), csv}).code == 0);
    CHECK(fs::exists(dir / "mixed.layers.csv"));
    REQUIRE(run({"convert", csv, json}).code == 0);
    const auto a = mln::load_network_file(path("valid/mixed.json"));
    const auto b = mln::load_network_file(json);
    REQUIRE(b.ok());
    CHECK(mln::semantically_equal(*a.snapshot, *b.snapshot));
    CHECK(run({"stats", path("valid/mixed.json")}).out == run({"stats", csv}).out);
    fs::remove_all(dir);
}

TEST_CASE("view of a saved session") {
    const auto dir = fs::temp_directory_path() / "mlt_cli_view";
    fs::create_directories(dir);
    mln::SessionState state;
    state.network = std::make_shared<const mln::NetworkSnapshot>(mlt::load_json(slurp(path("valid/mixed.json"))));
    state.view.selection = mln::NodeSelection{"A"};
    state.view.filters.show_interlayer = true;
    {
        std::ofstream out(dir / "s.json");
        out << mln::save_session(state);
    }
    const auto r = run({"view", (dir / "s.json").string()});
    REQUIRE(r.code == 0);
    const auto expected = mln::report::to_json(*state.network, mln::apply_filters(*state.network, state.view));
    CHECK(nlohmann::json::parse(r.out) == nlohmann::json::parse(expected.dump()));

    const auto e = run({"view", (dir / "s.json").string(), "--export"});
    REQUIRE(e.code == 0);
    CHECK_FALSE(nlohmann::json::parse(e.out)["circles"].empty());

    {
        std::ofstream out(dir / "broken.json");
        out << "{\"format_version\": 99}";
    }
    const auto broken = run({"view", (dir / "broken.json").string()});
    CHECK(broken.code == 1);
    CHECK(broken.err.find("version-mismatch") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("installed binary runs") {
    const std::string cmd = std::string("\"") + MLT_CLI + "\" validate \"" + path("valid/minimal.json") + "\" > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    const std::string bad = std::string("\"") + MLT_CLI + "\" validate \"" + path("invalid/missing_extended.json") +
                            "\" > /dev/null";
    const int status = std::system(bad.c_str());
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 1);
}
