#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <h2pc/network.hpp>

#include <algorithm>
#include <sstream>

using namespace h2pc;

TEST_CASE("deterministic chain reproduces the forced configuration") {
    // 0 -> 1 -> 2, root fixed at level 1, each child copies its parent.
    const std::vector<Edge> e{{0, 1}, {1, 2}};
    Eigen::MatrixXd root(2, 1), copy(2, 2);
    root << 0, 1;
    copy << 1, 0, 0, 1;
    const BayesianNetwork net(testing::make_variables({2, 2, 2}), Dag::from_edges(3, e), {root, copy, copy});
    const auto ds = forward_sample(net, 500, 1);
    CHECK((ds.cells().array() == 1).all());
}

TEST_CASE("fair coin frequency stays within four sigma") {
    Eigen::MatrixXd p(2, 1);
    p << 0.5, 0.5;
    const BayesianNetwork net(testing::make_variables({2}), Dag(1), {p});
    const auto ds = forward_sample(net, 10000, 99);
    const double freq = (ds.cells().col(0).array() == 0).cast<double>().mean();
    CHECK(std::abs(freq - 0.5) <= 0.02);
}

TEST_CASE("sampling is reproducible and seed-sensitive") {
    const auto net = read_network(testing::data_path("net10.json"));
    CHECK(forward_sample(net, 300, 5).cells() == forward_sample(net, 300, 5).cells());
    CHECK(forward_sample(net, 300, 5).cells() != forward_sample(net, 300, 6).cells());
}

TEST_CASE("sampled frequencies follow the CPTs") {
    h2pc::Rng rng(12);
    const std::vector<int> arities{3, 2, 2};
    const std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}};
    const auto net = testing::copy_network(rng, Dag::from_edges(3, e), arities, 1.0);
    const int n = 200000;
    const auto ds = forward_sample(net, n, 3);
    // P(V2 = 1 | V0 = 2, V1 = 0) against its CPT entry.
    int hits = 0, total = 0;
    for (int i = 0; i < n; ++i) {
        if (ds(i, 0) == 2 && ds(i, 1) == 0) {
            ++total;
            hits += ds(i, 2) == 1;
        }
    }
    const Level assignment[] = {2, 0, 0};
    const double p = net.cpt(2)(1, net.parent_config(2, assignment));
    const double sigma = std::sqrt(p * (1 - p) / total);
    CHECK(std::abs(static_cast<double>(hits) / total - p) < 4 * sigma);
}

TEST_CASE("json round trip") {
    h2pc::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(uniform_below(rng, 7));
        std::vector<int> arities;
        for (int v = 0; v < d; ++v) arities.push_back(2 + static_cast<int>(uniform_below(rng, 3)));
        const auto net = testing::copy_network(rng, testing::random_dag(rng, d, 3, 0.6), arities, 1.5);
        std::stringstream buf;
        write_network(buf, net);
        const auto back = read_network(buf);
        CHECK(back.graph() == net.graph());
        CHECK(back.variables() == net.variables());
        for (int v = 0; v < d; ++v) CHECK(back.cpt(v) == net.cpt(v));
    }
}

TEST_CASE("listed parent order is honoured when reading CPTs") {
    // Parents listed as (b, a); a has index 0, so the stored columns are re-indexed.
    const std::string text = R"({
      "variables": [{"name": "a", "levels": ["0", "1"]}, {"name": "b", "levels": ["0", "1", "2"]},
                    {"name": "c", "levels": ["0", "1"]}],
      "edges": [["b", "c"], ["a", "c"]],
      "cpts": {"a": [0.5, 0.5], "b": [0.2, 0.3, 0.5],
               "c": [0.1, 0.9,  0.2, 0.8,  0.3, 0.7,  0.4, 0.6,  0.5, 0.5,  0.6, 0.4]}
    })";
    std::istringstream in(text);
    const auto net = read_network(in);
    // b = 2, a = 1 is listed configuration 2·2 + 1 = 5.
    const Level assignment[] = {1, 2, 0};
    CHECK(net.cpt(2)(1, net.parent_config(2, assignment)) == doctest::Approx(0.4));
}

TEST_CASE("invalid networks are rejected") {
    const std::string bad_sum = R"({"variables": [{"name": "a", "levels": ["0", "1"]}],
                                    "edges": [], "cpts": {"a": [0.4, 0.5]}})";
    std::istringstream a(bad_sum);
    CHECK_THROWS_WITH_AS(read_network(a), doctest::Contains("'a'"), DataError);

    const std::string cyclic = R"({"variables": [{"name": "a", "levels": ["0", "1"]}, {"name": "b", "levels": ["0", "1"]}],
                                   "edges": [["a", "b"], ["b", "a"]], "cpts": {"a": [0.5, 0.5, 0.5, 0.5], "b": [0.5, 0.5, 0.5, 0.5]}})";
    std::istringstream b(cyclic);
    CHECK_THROWS_AS(read_network(b), DataError);

    const std::string short_cpt = R"({"variables": [{"name": "a", "levels": ["0", "1"]}], "edges": [], "cpts": {"a": [1.0]}})";
    std::istringstream c(short_cpt);
    CHECK_THROWS_WITH_AS(read_network(c), doctest::Contains("expected 2"), DataError);

    std::istringstream d("{not json");
    CHECK_THROWS_AS(read_network(d), DataError);

    Eigen::MatrixXd p(2, 1);
    p << 0.6, 0.3;
    CHECK_THROWS_AS(BayesianNetwork(testing::make_variables({2}), Dag(1), {p}), DataError);
}

TEST_CASE("child-shaped fixture: 20 nodes, 25 edges, in-degree at most 2") {
    const auto net = read_network(testing::data_path("child20.json"));
    CHECK(net.d() == 20);
    CHECK(net.graph().edge_count() == 25);
    int max_in = 0;
    for (int v = 0; v < net.d(); ++v) max_in = std::max(max_in, static_cast<int>(net.graph().parents(v).size()));
    CHECK(max_in == 2);
}

TEST_CASE("fitted parameters recover the generating CPTs") {
    const auto net = read_network(testing::data_path("net10.json"));
    const auto ds = forward_sample(net, 50000, 8);
    const auto fit = fit_parameters(net.graph(), ds);
    for (int v = 0; v < net.d(); ++v) {
        CHECK((fit.cpt(v) - net.cpt(v)).cwiseAbs().maxCoeff() < 0.05);
    }
    // A pseudo-count keeps unseen configurations off zero.
    const auto tiny = forward_sample(net, 5, 8);
    const auto smooth = fit_parameters(net.graph(), tiny, 1.0);
    for (int v = 0; v < net.d(); ++v) CHECK(smooth.cpt(v).minCoeff() > 0.0);
}
