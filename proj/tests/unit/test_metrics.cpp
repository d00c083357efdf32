#include <doctest.h>

#include <cmath>
#include <vector>

#include "checks.hpp"
#include "generator.hpp"
#include "mln/error.hpp"
#include "mln/histogram.hpp"
#include "mln/metrics.hpp"

using mlt::RawEdge;
using mlt::RawState;
using mln::Direction;

namespace {

std::string error_code(auto&& fn) {
    try {
        fn();
    } catch (const mln::Error& e) {
        return e.code();
    }
    return {};
}

// Bipartite layer B with plants p* and pollinators q*, undirected unless asked.
mlt::RawNetwork bipartite(int plants, int pollinators, const std::vector<std::pair<int, int>>& links,
                          bool directed = false) {
    mlt::RawNetwork net;
    net.directed = directed;
    net.directed_interlayer = directed;
    net.layers.push_back({"B", true});
    for (int i = 0; i < plants; ++i) {
        net.nodes.push_back({"p" + std::to_string(i), "plant"});
        net.states.push_back({"B", "p" + std::to_string(i)});
    }
    for (int i = 0; i < pollinators; ++i) {
        net.nodes.push_back({"q" + std::to_string(i), "pollinator"});
        net.states.push_back({"B", "q" + std::to_string(i)});
    }
    for (auto [p, q] : links) net.edges.push_back({"B", "p" + std::to_string(p), "B", "q" + std::to_string(q)});
    return net;
}

}  // namespace

TEST_CASE("intralayer degree") {
    SUBCASE("isolated") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}}, {}));
        CHECK(mln::intralayer_degree(s, "A", "L") == 0);
        CHECK(mln::intralayer_strength(s, "A", "L") == 0.0);
    }
    SUBCASE("self-loop excluded") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}, {"L", "C"}},
                                             {{"L", "A", "L", "B"}, {"L", "A", "L", "C"}, {"L", "A", "L", "A"}}));
        CHECK(mln::intralayer_degree(s, "A", "L") == 2);
        CHECK(mln::intralayer_degree(s, "B", "L") == 1);
    }
    SUBCASE("directed in and out") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}, {"L", "C"}},
                                             {{"L", "A", "L", "B"}, {"L", "C", "L", "A"}}, true));
        CHECK(mln::intralayer_degree(s, "A", "L", Direction::out) == 1);
        CHECK(mln::intralayer_degree(s, "A", "L", Direction::in) == 1);
        CHECK(mln::intralayer_degree(s, "B", "L", Direction::out) == 0);
        CHECK(error_code([&] { (void)mln::intralayer_degree(s, "A", "L"); }) == "direction-mismatch");
    }
    SUBCASE("unknown identifiers") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"M", "B"}}, {}));
        CHECK(error_code([&] { (void)mln::intralayer_degree(s, "Z", "L"); }) == "unknown-node");
        CHECK(error_code([&] { (void)mln::intralayer_degree(s, "A", "Z"); }) == "unknown-layer");
        CHECK(error_code([&] { (void)mln::intralayer_degree(s, "B", "L"); }) == "unknown-state-node");
        CHECK(error_code([&] { (void)mln::intralayer_degree(s, "A", "L", Direction::in); }) == "direction-mismatch");
    }
}

TEST_CASE("intralayer strength") {
    const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}, {"L", "C"}},
                                         {{"L", "A", "L", "B", 2.0}, {"L", "A", "L", "C", 0.5}}));
    CHECK(mln::intralayer_strength(s, "A", "L") == doctest::Approx(2.5));
    CHECK(mln::intralayer_strength(s, "C", "L") == doctest::Approx(0.5));
}

TEST_CASE("interlayer degree and strength") {
    SUBCASE("single replica coupling") {
        const auto s = mlt::load(mlt::simple({{"L1", "A"}, {"L2", "A"}}, {{"L1", "A", "L2", "A"}}));
        CHECK(mln::interlayer_degree(s, "A", "L1") == 1);
        CHECK(mln::interlayer_degree(s, "A", "L2") == 1);
    }
    SUBCASE("two replicas plus a general coupling") {
        const auto s = mlt::load(mlt::simple({{"L1", "A"}, {"L2", "A"}, {"L3", "A"}, {"L2", "B"}},
                                             {{"L1", "A", "L2", "A", 0.55},
                                              {"L1", "A", "L3", "A", 0.55},
                                              {"L1", "A", "L2", "B", 0.2}}));
        CHECK(mln::interlayer_degree(s, "A", "L1") == 3);
        CHECK(mln::interlayer_strength(s, "A", "L1") == doctest::Approx(1.30));
        CHECK(mln::interlayer_degree(s, "B", "L2") == 1);
    }
    SUBCASE("replica weights 0.55 to two layers") {
        const auto s = mlt::load(mlt::simple({{"L1", "A"}, {"L2", "A"}, {"L3", "A"}},
                                             {{"L1", "A", "L2", "A", 0.55}, {"L1", "A", "L3", "A", 0.55}}));
        CHECK(mln::interlayer_strength(s, "A", "L1") == doctest::Approx(1.10).epsilon(1e-12));
    }
    SUBCASE("no interlayer edges") {
        const auto s = mlt::load(mlt::simple({{"L1", "A"}, {"L2", "A"}, {"L1", "B"}}, {{"L1", "A", "L1", "B"}}));
        const auto b = mln::compute_bundle(s);
        CHECK(b.state.values(mln::Metric::k_inter).isZero());
        CHECK(b.state.values(mln::Metric::s_inter).isZero());
    }
    SUBCASE("directed interlayer") {
        const auto s = mlt::load(mlt::simple({{"L1", "A"}, {"L2", "A"}, {"L1", "B"}},
                                             {{"L1", "A", "L2", "A"}, {"L1", "A", "L1", "B"}}, false, true));
        CHECK(mln::interlayer_degree(s, "A", "L1", Direction::out) == 1);
        CHECK(mln::interlayer_degree(s, "A", "L1", Direction::in) == 0);
        CHECK(mln::interlayer_degree(s, "A", "L2", Direction::in) == 1);
        CHECK(mln::intralayer_degree(s, "A", "L1") == 1);
        CHECK(error_code([&] { (void)mln::interlayer_degree(s, "A", "L1"); }) == "direction-mismatch");
    }
}

TEST_CASE("aggregates and participation") {
    // A: k_intra 2 in L1, 4 in L2; absent from L3.
    const auto s = mlt::load(mlt::simple(
        {{"L1", "A"}, {"L1", "B"}, {"L1", "C"}, {"L2", "A"}, {"L2", "B"}, {"L2", "C"}, {"L2", "D"}, {"L2", "E"},
         {"L3", "B"}},
        {{"L1", "A", "L1", "B"}, {"L1", "A", "L1", "C"}, {"L2", "A", "L2", "B"}, {"L2", "A", "L2", "C"},
         {"L2", "A", "L2", "D"}, {"L2", "A", "L2", "E"}}));
    CHECK(mln::aggregate_over_layers(s, "A", mln::Metric::k_intra, mln::AggregateMode::sum) == 6.0);
    CHECK(mln::aggregate_over_layers(s, "A", mln::Metric::k_intra, mln::AggregateMode::mean) == 3.0);
    CHECK(mln::aggregate_over_layers(s, "D", mln::Metric::k_intra, mln::AggregateMode::sum) == 1.0);
    CHECK(mln::aggregate_over_layers(s, "D", mln::Metric::k_intra, mln::AggregateMode::mean) == 1.0);
    // B is in three layers; L3 contributes a zero and counts toward the mean.
    CHECK(mln::aggregate_over_layers(s, "B", mln::Metric::k_intra, mln::AggregateMode::mean) == doctest::Approx(2.0 / 3));
    CHECK(mln::participation(s, "A") == 2);
    CHECK(mln::participation(s, "B") == 3);
    CHECK(error_code([&] { (void)mln::participation(s, "nobody"); }) == "unknown-node");

    const auto five = mlt::load(mlt::simple(
        {{"L0", "X"}, {"L1", "A"}, {"L1", "X"}, {"L2", "X"}, {"L3", "A"}, {"L3", "X"}, {"L4", "X"}}, {}));
    CHECK(mln::participation(five, "A") == 2);
    CHECK(mln::participation(five, "X") == 5);
    const auto b = mln::compute_bundle(five);
    CHECK(b.distributions.presence.rowwise().sum() == b.aggregates.participation);
}

TEST_CASE("layer density") {
    SUBCASE("complete unipartite") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}, {"L", "C"}},
                                             {{"L", "A", "L", "B"}, {"L", "B", "L", "C"}, {"L", "A", "L", "C"}}));
        CHECK(*mln::layer_density(s, "L") == 1.0);
    }
    SUBCASE("N=4, |E|=3") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}, {"L", "C"}, {"L", "D"}},
                                             {{"L", "A", "L", "B"}, {"L", "B", "L", "C"}, {"L", "C", "L", "D"}}));
        CHECK(*mln::layer_density(s, "L") == 0.5);
    }
    SUBCASE("directed N=3, |E|=3") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}, {"L", "C"}},
                                             {{"L", "A", "L", "B"}, {"L", "B", "L", "A"}, {"L", "C", "L", "A"}}, true));
        CHECK(*mln::layer_density(s, "L") == 0.5);
    }
    SUBCASE("bipartite 2x3 with 3 edges") {
        const auto s = mlt::load(bipartite(2, 3, {{0, 0}, {0, 1}, {1, 2}}));
        CHECK(*mln::layer_density(s, "B") == 0.5);
    }
    SUBCASE("directed bipartite 2x3 with 3 edges") {
        const auto s = mlt::load(bipartite(2, 3, {{0, 0}, {0, 1}, {1, 2}}, true));
        CHECK(*mln::layer_density(s, "B") == 0.25);
    }
    SUBCASE("bipartite with an empty set") {
        const auto s = mlt::load(bipartite(3, 0, {}));
        CHECK_FALSE(mln::layer_density(s, "B").has_value());
    }
    SUBCASE("self-loops excluded") {
        const auto s = mlt::load(mlt::simple({{"L", "A"}, {"L", "B"}}, {{"L", "A", "L", "B"}, {"L", "A", "L", "A"}}));
        CHECK(*mln::layer_density(s, "L") == 1.0);
    }
}

TEST_CASE("average density") {
    SUBCASE("0.5 and 1.0") {
        const auto s = mlt::load(mlt::simple(
            {{"L1", "A"}, {"L1", "B"}, {"L1", "C"}, {"L1", "D"}, {"L2", "A"}, {"L2", "B"}},
            {{"L1", "A", "L1", "B"}, {"L1", "B", "L1", "C"}, {"L1", "C", "L1", "D"}, {"L2", "A", "L2", "B"}}));
        const auto avg = mln::average_density(s);
        CHECK(avg.value == 0.75);
        CHECK(avg.included == 2);
        CHECK(avg.excluded == 0);
    }
    SUBCASE("one undefined layer") {
        // L2 has N=5 and 4 edges: 4/10 = 0.4.
        const auto s = mlt::load(mlt::simple(
            {{"L1", "A"}, {"L2", "A"}, {"L2", "B"}, {"L2", "C"}, {"L2", "D"}, {"L2", "E"}},
            {{"L2", "A", "L2", "B"}, {"L2", "B", "L2", "C"}, {"L2", "C", "L2", "D"}, {"L2", "D", "L2", "E"}}));
        const auto avg = mln::average_density(s);
        CHECK(avg.value == doctest::Approx(0.4));
        CHECK(avg.included == 1);
        CHECK(avg.excluded == 1);
    }
    SUBCASE("nothing defined") {
        const auto s = mlt::load(mlt::simple({{"L1", "A"}}, {}));
        const auto avg = mln::average_density(s);
        CHECK(std::isnan(avg.value));
        CHECK(avg.excluded == 1);
    }
}

TEST_CASE("jaccard") {
    const auto s = mlt::load(mlt::simple(
        {{"L1", "A"}, {"L1", "B"}, {"L1", "C"}, {"L2", "B"}, {"L2", "C"}, {"L2", "D"}, {"L3", "E"}, {"L4", "F"}},
        {{"L1", "A", "L1", "B"}, {"L1", "B", "L1", "C"}, {"L2", "B", "L2", "C"}, {"L2", "C", "L2", "D"}}));
    CHECK(*mln::jaccard_nodes(s, 0, 1) == 0.5);
    CHECK(*mln::jaccard_nodes(s, 0, 0) == 1.0);
    CHECK(*mln::jaccard_nodes(s, 0, 2) == 0.0);
    CHECK(*mln::jaccard_edges(s, 0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(*mln::jaccard_edges(s, 1, 1) == 1.0);
    CHECK(*mln::jaccard_edges(s, 0, 2) == 0.0);
    CHECK_FALSE(mln::jaccard_edges(s, 2, 3).has_value());
    CHECK_FALSE(mln::jaccard_nodes(s, 0, 1, mln::NodeSubset::set_a).has_value());

    SUBCASE("weights and orientation ignored") {
        const auto t = mlt::load(mlt::simple({{"L1", "A"}, {"L1", "B"}, {"L2", "A"}, {"L2", "B"}},
                                             {{"L1", "A", "L1", "B", 3.0}, {"L2", "B", "L2", "A", 0.1}}));
        CHECK(*mln::jaccard_edges(t, 0, 1) == 1.0);
    }
    SUBCASE("per node set") {
        mlt::RawNetwork net = bipartite(2, 2, {});
        net.layers.push_back({"C", true});
        net.nodes.push_back({"p2", "plant"});
        for (const char* v : {"p0", "p2", "q0", "q1"}) net.states.push_back({"C", v});
        const auto t = mlt::load(net);
        CHECK(*mln::jaccard_nodes(t, 0, 1, mln::NodeSubset::set_a) == doctest::Approx(1.0 / 3));
        CHECK(*mln::jaccard_nodes(t, 0, 1, mln::NodeSubset::set_b) == 1.0);
        CHECK(*mln::jaccard_nodes(t, 0, 1) == 0.6);
        const auto b = mln::compute_bundle(t);
        REQUIRE(b.pairwise.set_labels == std::vector<std::string>{"plant", "pollinator"});
        CHECK(b.pairwise.jaccard_node_by_set[0](0, 1) == doctest::Approx(1.0 / 3));
        CHECK(b.pairwise.jaccard_node_by_set[1](1, 0) == 1.0);
    }
}

TEST_CASE("minimal network bundle") {
    const auto s = mlt::load(mlt::simple({{"L1", "A"}}, {}));
    const auto b = mln::compute_bundle(s);
    for (auto m : b.state.available()) CHECK(b.state.values(m).isZero());
    CHECK(b.aggregates.participation(0) == 1);
    CHECK(std::isnan(b.layers.density(0)));
    CHECK(b.layers.node_count(0) == 1);
    CHECK(b.layers.edge_count(0) == 0);
    CHECK(b.pairwise.jaccard_node(0, 0) == 1.0);
    CHECK(std::isnan(b.pairwise.jaccard_edge(0, 0)));
}

TEST_CASE("available selectors follow directedness") {
    using mln::Metric;
    const auto und = mln::compute_bundle(mlt::load(mlt::simple({{"L", "A"}}, {})));
    CHECK(und.state.available() == std::vector<Metric>{Metric::k_intra, Metric::s_intra, Metric::k_inter, Metric::s_inter});
    CHECK(error_code([&] { (void)und.state.values(Metric::k_intra_in); }) == "direction-mismatch");

    const auto mixed = mln::compute_bundle(mlt::load(mlt::simple({{"L", "A"}}, {}, false, true)));
    CHECK(mixed.state.available() == std::vector<Metric>{Metric::k_intra, Metric::s_intra, Metric::k_inter_in,
                                                         Metric::k_inter_out, Metric::s_inter_in, Metric::s_inter_out});
    for (auto m : mixed.state.available()) CHECK(mln::metric_from_string(mln::to_string(m)) == m);
}

TEST_CASE("bundle is deterministic and idempotent") {
    std::mt19937_64 rng(99);
    const auto s = mlt::load(mlt::random_network(rng, mlt::combination(7)));
    const auto a = mln::compute_bundle(s);
    const auto b = mln::compute_bundle(s);
    for (auto m : a.state.available()) CHECK(a.state.values(m) == b.state.values(m));
    CHECK(a.distributions.histograms == b.distributions.histograms);
    CHECK(a.pairwise.shared_edges == b.pairwise.shared_edges);
}

TEST_CASE("histogram") {
    SUBCASE("two bins") {
        const std::vector<double> v{0, 1, 2, 3};
        const auto h = mln::histogram(v, 2);
        CHECK(h.edges == std::vector<double>{0.0, 1.5, 3.0});
        CHECK(h.counts == std::vector<std::size_t>{2, 2});
    }
    SUBCASE("maximum lands in the last bin") {
        const std::vector<double> v{0, 10};
        const auto h = mln::histogram(v, 5);
        CHECK(h.counts == std::vector<std::size_t>{1, 0, 0, 0, 1});
    }
    SUBCASE("constant") {
        const std::vector<double> v{4, 4, 4};
        const auto h = mln::histogram(v, 20);
        std::size_t occupied = 0;
        for (auto c : h.counts) occupied += c > 0;
        CHECK(occupied == 1);
        CHECK(h.total() == 3);
        CHECK(h.edges.front() <= 4.0);
        CHECK(h.edges.back() >= 4.0);
    }
    SUBCASE("empty") {
        const auto h = mln::histogram(std::vector<double>{}, 20);
        CHECK(h.counts.empty());
        CHECK(h.total() == 0);
    }
    SUBCASE("conservation") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-50, 50);
        for (int n = 2; n < 200; n += 7) {
            std::vector<double> v(n);
            for (auto& x : v) x = u(rng);
            for (std::size_t bins : {1u, 3u, 20u}) {
                const auto h = mln::histogram(v, bins);
                CHECK(h.total() == v.size());
                CHECK(h.counts.size() == bins);
                CHECK(h.edges.size() == bins + 1);
            }
        }
    }
    SUBCASE("shared range clamps") {
        const std::vector<double> v{-5, 0.5, 9};
        const auto h = mln::histogram_on_range(v, 0, 1, 2);
        CHECK(h.counts == std::vector<std::size_t>{1, 2});
    }
}

TEST_CASE("oracle agreement on hand-built networks") {
    const auto net = mlt::simple({{"L1", "A"}, {"L1", "B"}, {"L2", "A"}, {"L2", "C"}},
                                 {{"L1", "A", "L1", "B", 2.0}, {"L1", "A", "L2", "A", 0.5}, {"L2", "C", "L2", "A"},
                                  {"L1", "B", "L2", "C", 0.25}, {"L2", "C", "L2", "C"}},
                                 true);
    const auto s = mlt::load(net);
    CHECK(mlt::check_metrics_against_oracle(s, net).empty());
    CHECK(mlt::check_invariants(s).empty());
}
