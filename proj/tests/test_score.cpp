#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"

#include <h2pc/eval.hpp>
#include <h2pc/network.hpp>
#include <h2pc/score.hpp>

#include <cmath>

using namespace h2pc;

TEST_CASE("BDeu of a single observation") {
    // Counts (1, 0), ess 1: lnΓ(1) − lnΓ(2) + lnΓ(1.5) − lnΓ(0.5) = ln 0.5.
    const auto ds = testing::dataset_from_rows({{0}}, {2});
    CHECK(bdeu_local(ds, 0, {}, 1.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
}

TEST_CASE("BDeu matches the sequential predictive oracle on toy tables") {
    // Up to three rows, every combination of levels over a 3 x 2 x 2 schema.
    int cases = 0;
    for (int n = 1; n <= 3; ++n) {
        int combos = 1;
        for (int i = 0; i < n; ++i) combos *= 12;
        for (int code = 0; code < combos; ++code) {
            std::vector<std::vector<int>> rows;
            int c = code;
            for (int i = 0; i < n; ++i) {
                rows.push_back({c % 3, (c / 3) % 2, (c / 6) % 2});
                c /= 12;
            }
            const auto ds = testing::dataset_from_rows(rows, {3, 2, 2});
            for (double ess : {1.0, 10.0}) {
                for (const auto& pa : std::vector<std::vector<int>>{{}, {1}, {1, 2}}) {
                    const double expected = oracle::bdeu_sequential(ds, 0, pa, ess);
                    REQUIRE(std::abs(bdeu_local(ds, 0, pa, ess) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
                    ++cases;
                }
            }
        }
    }
    CHECK(cases > 10000);
}

TEST_CASE("BDeu matches the oracle on random data") {
    h2pc::Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ds = testing::uniform_dataset(rng, 50 + 20 * trial, {3, 2, 4, 2});
        const std::vector<int> pa{1, 2, 3};
        const double expected = oracle::bdeu_sequential(ds, 0, pa, 10.0);
        CHECK(bdeu_local(ds, 0, pa, 10.0) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("BIC by hand and against the row-wise oracle") {
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({i % 2});
    const auto ds = testing::dataset_from_rows(rows, {2});
    CHECK(bic_local(ds, 0, {}) == doctest::Approx(10 * std::log(0.5) - 0.5 * std::log(10.0)).epsilon(1e-14));

    h2pc::Rng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = testing::uniform_dataset(rng, 3 + trial, {2, 3, 2});
        const std::vector<int> pa{1, 2};
        CHECK(bic_local(r, 0, pa) == doctest::Approx(oracle::bic_rowwise(r, 0, pa)).epsilon(1e-12));
    }
}

TEST_CASE("BIC rejects independent parents and accepts a copied one") {
    h2pc::Rng rng(23);
    int rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto ds = testing::uniform_dataset(rng, 1000, {2, 2});
        const int pa[] = {1};
        rejected += bic_local(ds, 0, pa) < bic_local(ds, 0, {});
    }
    // Accepting needs G² > ln 1000 on one degree of freedom: p ≈ 0.009.
    CHECK(rejected >= 95);

    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 20; ++i) rows.push_back({i % 2, i % 2});
    const auto copy = testing::dataset_from_rows(rows, {2, 2});
    const int pa[] = {0};
    CHECK(bic_local(copy, 1, pa) > bic_local(copy, 1, {}));
}

TEST_CASE("score type names") {
    CHECK(parse_score_type("bdeu") == ScoreType::bdeu);
    CHECK(parse_score_type("bic") == ScoreType::bic);
    CHECK(to_string(ScoreType::bic) == "bic");
    CHECK_THROWS_AS(parse_score_type("aic"), std::invalid_argument);
}

TEST_CASE("totals: empty graph, cache on and off") {
    h2pc::Rng rng(24);
    const auto g = testing::random_dag(rng, 6, 3, 0.6);
    const auto net = testing::copy_network(rng, g, {2, 3, 2, 2, 3, 2}, 1.0);
    const auto ds = forward_sample(net, 500, 2);
    double sum = 0;
    for (int v = 0; v < 6; ++v) sum += bdeu_local(ds, v, {}, 10.0);
    CHECK(total_score(ds, Dag(6), ScoreConfig{}) == doctest::Approx(sum).epsilon(1e-14));

    for (ScoreType t : {ScoreType::bdeu, ScoreType::bic}) {
        const LocalScorer cached(ds, t, 10.0, true);
        const LocalScorer plain(ds, t, 10.0, false);
        CHECK(cached.total(g) == plain.total(g));
        CHECK(cached.total(g) == plain.total(g));
    }
}

TEST_CASE("two-node orientations score the same") {
    h2pc::Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ds = testing::uniform_dataset(rng, 30 + trial, {3, 2});
        const std::vector<Edge> ab{{0, 1}}, ba{{1, 0}};
        const auto s1 = total_score(ds, Dag::from_edges(2, ab), ScoreConfig{});
        const auto s2 = total_score(ds, Dag::from_edges(2, ba), ScoreConfig{});
        CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
    }
}

TEST_CASE("equivalent three-node DAGs get equal BDeu") {
    h2pc::Rng rng(26);
    const auto dags = oracle::all_dags(3);
    CHECK(dags.size() == 25);
    for (int trial = 0; trial < 5; ++trial) {
        const auto ds = testing::uniform_dataset(rng, 100, {2, 3, 2});
        for (const auto& a : dags) {
            for (const auto& b : dags) {
                if (oracle::equivalence_key(3, a) != oracle::equivalence_key(3, b)) continue;
                const double sa = total_score(ds, Dag::from_edges(3, a), ScoreConfig{});
                const double sb = total_score(ds, Dag::from_edges(3, b), ScoreConfig{});
                CHECK(std::abs(sa - sb) <= 1e-8);
            }
        }
    }
}

TEST_CASE("search config validation") {
    ScoreConfig c;
    c.ess = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.ess = 1;
    c.patience = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("an empty skeleton admits no edges") {
    h2pc::Rng rng(27);
    const auto ds = testing::uniform_dataset(rng, 100, {2, 2, 2});
    const auto r = hill_climb(ds, Skeleton(3), ScoreConfig{});
    CHECK(r.dag.edge_count() == 0);
    CHECK(r.moves == 0);
}

TEST_CASE("a copied column gets one edge") {
    std::vector<std::vector<int>> rows;
    h2pc::Rng rng(28);
    for (int i = 0; i < 200; ++i) {
        const int x = static_cast<int>(uniform_below(rng, 2));
        rows.push_back({x, x});
    }
    const auto ds = testing::dataset_from_rows(rows, {2, 2});
    Skeleton s(2);
    s.add_edge(0, 1);
    const auto r = hill_climb(ds, s, ScoreConfig{});
    CHECK(r.dag.edge_count() == 1);
    CHECK(r.score > r.initial_score);
}

TEST_CASE("search result is consistent with its own scores") {
    const auto net = read_network(testing::data_path("net10.json"));
    const auto ds = forward_sample(net, 1000, 3);
    const auto skel = Skeleton::from_dag(net.graph());
    for (ScoreType t : {ScoreType::bdeu, ScoreType::bic}) {
        ScoreConfig cfg;
        cfg.score = t;
        const auto r = hill_climb(ds, skel, cfg);
        CHECK(r.score == doctest::Approx(total_score(ds, r.dag, cfg)).epsilon(1e-12));
        CHECK(r.initial_score == doctest::Approx(total_score(ds, Dag(10), cfg)).epsilon(1e-12));
        CHECK(r.score >= r.initial_score);
        CHECK(static_cast<int>(r.trace.size()) == r.moves);
        for (auto [a, b] : r.dag.edges()) CHECK(skel.has_edge(a, b));
        // No single legal move from the returned structure improves on it by more than the tie tolerance.
        for (int a = 0; a < 10; ++a) {
            for (int b : skel.neighbors(a)) {
                Dag g = r.dag;
                if (g.has_edge(a, b)) {
                    g.remove_edge(a, b);
                } else if (g.can_add(a, b)) {
                    g.add_edge(a, b);
                } else {
                    continue;
                }
                CHECK(total_score(ds, g, cfg) <= r.score + 1e-9 * std::abs(r.score));
            }
        }
    }
}

TEST_CASE("parallel move scoring gives the same search") {
    const auto net = read_network(testing::data_path("child20.json"));
    const auto ds = forward_sample(net, 3000, 5);
    const auto skel = Skeleton::from_dag(net.graph());
    ScoreConfig one, four;
    four.jobs = 4;
    const auto a = hill_climb(ds, skel, one);
    const auto b = hill_climb(ds, skel, four);
    CHECK(a.dag == b.dag);
    CHECK(a.trace == b.trace);
}

TEST_CASE("with the true skeleton the search lands in the true equivalence class") {
    const auto net = read_network(testing::data_path("net10.json"));
    const auto truth = dag_to_cpdag(net.graph());
    const auto skel = Skeleton::from_dag(net.graph());
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ds = forward_sample(net, 20000, 100 + seed);
        hits += shd(dag_to_cpdag(hill_climb(ds, skel, ScoreConfig{}).dag), truth) == 0;
    }
    CHECK(hits >= 8);
}
