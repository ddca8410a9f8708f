#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"

#include <h2pc/citest.hpp>

#include <cmath>

using namespace h2pc;

namespace {

/// Dataset over (X, Y[, Z]) reproducing the given per-stratum counts.
CategoricalDataset from_counts(const std::vector<std::vector<std::vector<int>>>& strata) {
    const int r = static_cast<int>(strata[0].size());
    const int c = static_cast<int>(strata[0][0].size());
    const int l = static_cast<int>(strata.size());
    std::vector<std::vector<int>> rows;
    for (int k = 0; k < l; ++k) {
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                for (int m = 0; m < strata[k][i][j]; ++m) rows.push_back({i, j, k});
            }
        }
    }
    return testing::dataset_from_rows(rows, {r, c, std::max(l, 2)});
}

ContingencyTable table_of(const std::vector<std::vector<std::vector<int>>>& strata) {
    const auto ds = from_counts(strata);
    const int z[] = {2};
    return strata.size() > 1 ? contingency(ds, 0, 1, z) : contingency(ds, 0, 1, {});
}

}  // namespace

TEST_CASE("mutual information is exactly zero on factorizing tables") {
    CHECK(mutual_information(table_of({{{10, 10}, {10, 10}}})) == 0.0);
    CHECK(mutual_information(table_of({{{2, 4, 6}, {3, 6, 9}}})) == 0.0);
    CHECK(mutual_information(table_of({{{1, 3}, {2, 6}}, {{5, 5}, {7, 7}}})) == 0.0);
    CHECK(g2_statistic(table_of({{{10, 10}, {10, 10}}})).statistic == 0.0);
}

TEST_CASE("mutual information of a 2x2 table by direct evaluation") {
    const double expected = 0.8 * std::log(1.6) + 0.2 * std::log(0.4);
    CHECK(mutual_information(table_of({{{20, 5}, {5, 20}}})) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("mutual information sums per stratum with weights") {
    // Stratum 0 factorizes; stratum 1 is the table above. Weight = 50 / 90.
    const auto t = table_of({{{10, 10}, {10, 10}}, {{20, 5}, {5, 20}}});
    const double inner = 0.8 * std::log(1.6) + 0.2 * std::log(0.4);
    CHECK(mutual_information(t) == doctest::Approx(inner * 50.0 / 90.0).epsilon(1e-14));
}

TEST_CASE("mutual information ignores row and column order within a stratum") {
    const double a = mutual_information(table_of({{{7, 1, 2}, {0, 4, 9}}}));
    const double b = mutual_information(table_of({{{9, 4, 0}, {2, 1, 7}}}));
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("degrees of freedom") {
    CHECK(g2_statistic(table_of({{{10, 10}, {10, 10}}})).dof == 1);
    // An all-zero column leaves a single supported column.
    CHECK(g2_statistic(table_of({{{10, 0}, {7, 0}}})).dof == 0);
    // 3 x 2 x 2, fully supported.
    CHECK(g2_statistic(table_of({{{1, 2}, {3, 4}, {5, 6}}, {{6, 5}, {4, 3}, {2, 1}}})).dof == 4);
    // 3 x 3 with an empty row in one stratum and an empty column in the other: 2·1 each.
    CHECK(g2_statistic(table_of({{{1, 2, 3}, {0, 0, 0}, {4, 5, 6}}, {{1, 0, 3}, {2, 0, 4}, {5, 0, 6}}})).dof == 2 + 2);
    // Both a row and a column missing in the same stratum.
    CHECK(g2_statistic(table_of({{{1, 0, 3}, {0, 0, 0}, {4, 0, 6}}})).dof == 1);
}

TEST_CASE("G2 equals 2n·MI and the explicit likelihood-ratio sum") {
    h2pc::Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ds = testing::uniform_dataset(rng, 40 + trial, {3, 2, 2, 3});
        const std::vector<int> z{2, 3};
        const auto t = contingency(ds, 0, 1, z);
        const double g = g2_statistic(t).statistic;
        CHECK(g == doctest::Approx(2.0 * t.n * mutual_information(t)).epsilon(1e-12));
        CHECK(std::abs(g - oracle::g2(ds, 0, 1, z)) <= 1e-9 * std::max(1.0, g));
    }
}

TEST_CASE("chi-square survival") {
    CHECK(chi2_survival(0.0, 1) == 1.0);
    CHECK(chi2_survival(0.0, 17) == 1.0);
    CHECK(chi2_survival(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(chi2_survival(18.307, 10) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK_THROWS_AS(chi2_survival(1.0, 0), std::invalid_argument);
}

TEST_CASE("chi-square with one degree of freedom is a squared standard normal") {
    for (double z = 0.05; z < 6.0; z += 0.05) {
        CHECK(std::abs(chi2_survival(z * z, 1) - std::erfc(z / std::sqrt(2.0))) < 1e-9);
    }
}

TEST_CASE("chi-square survival matches quadrature and decreases in x") {
    for (int k : {1, 2, 5, 13, 30}) {
        double prev = 1.0;
        for (double x = 0.0; x <= 60.0; x += 1.5) {
            const double s = chi2_survival(x, k);
            CHECK(std::abs(s - oracle::chi2_survival(x, k)) < 1e-8);
            CHECK(s <= prev);
            prev = s;
        }
    }
}

TEST_CASE("power rule fires on sparse tables") {
    h2pc::Rng rng(1);
    const auto ds = testing::uniform_dataset(rng, 50, {2, 2, 2, 2, 2});
    const std::vector<int> z{2, 3, 4};
    const auto r = test_independence(ds, 0, 1, z, TestConfig{});
    CHECK(r.decided_by_power_rule);
    CHECK(r.independent);
    CHECK(r.p_value == 1.0);

    TestConfig observed;
    observed.power_cells = PowerRuleCells::observed;
    // 50 rows over at most 8 observed strata is still 1.5625 per cell or more sparse.
    CHECK(test_independence(ds, 0, 1, z, observed).decided_by_power_rule);
}

TEST_CASE("observed strata can keep a test alive that the nominal rule skips") {
    // Z has 10 levels but only one occurs: nominal cells 40, observed cells 4.
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 100; ++i) rows.push_back({i % 2, (i / 2) % 2, 0});
    auto ds = testing::dataset_from_rows(rows, {2, 2, 10});
    const int z[] = {2};
    CHECK(test_independence(ds, 0, 1, z, TestConfig{}).decided_by_power_rule);
    TestConfig observed;
    observed.power_cells = PowerRuleCells::observed;
    CHECK_FALSE(test_independence(ds, 0, 1, z, observed).decided_by_power_rule);
}

TEST_CASE("duplicated column is dependent") {
    h2pc::Rng rng(2);
    auto base = testing::uniform_dataset(rng, 200, {2, 2});
    LevelMatrix cells = base.cells();
    cells.col(1) = cells.col(0);
    const CategoricalDataset ds(base.variables(), cells);
    const auto r = test_independence(ds, 0, 1, {}, TestConfig{});
    CHECK_FALSE(r.independent);
    CHECK(r.p_value < 1e-10);
    CHECK(r.dof == 1);
}

TEST_CASE("zero degrees of freedom means independent") {
    // Y constant within the sample: a single supported column.
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 100; ++i) rows.push_back({i % 2, 0});
    const auto ds = testing::dataset_from_rows(rows, {2, 2});
    const auto r = test_independence(ds, 0, 1, {}, TestConfig{});
    CHECK(r.dof == 0);
    CHECK(r.independent);
    CHECK_FALSE(r.decided_by_power_rule);
}

TEST_CASE("independent pairs are accepted at about 1 - alpha") {
    h2pc::Rng rng(2024);
    int accepted = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto ds = testing::uniform_dataset(rng, 1000, {2, 3});
        accepted += test_independence(ds, 0, 1, {}, TestConfig{}).independent;
    }
    CHECK(accepted >= 90);
}

TEST_CASE("config validation") {
    TestConfig c;
    c.alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.alpha = 0.05;
    c.power_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
