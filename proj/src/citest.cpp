#include <h2pc/citest.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace h2pc {

void TestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
    if (!(power_threshold > 0.0)) throw std::invalid_argument("power threshold must be positive");
}

double mutual_information(const ContingencyTable& table) {
    if (table.n <= 0) throw std::invalid_argument("mutual_information: empty table");
    const double n = static_cast<double>(table.n);
    double mi = 0.0;
    for (const auto& s : table.strata) {
        const Eigen::VectorXd rows = s.rowwise().sum().cast<double>();
        const Eigen::RowVectorXd cols = s.colwise().sum().cast<double>();
        const double total = rows.sum();
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                const auto nij = static_cast<double>(s(i, j));
                if (nij == 0.0) continue;
                mi += nij / n * std::log(nij * total / (rows(i) * cols(j)));
            }
        }
    }
    // Exact factorizations can round to a tiny negative value.
    return mi < 0.0 ? 0.0 : mi;
}

G2 g2_statistic(const ContingencyTable& table) {
    G2 out;
    out.statistic = 2.0 * static_cast<double>(table.n) * mutual_information(table);
    for (const auto& s : table.strata) {
        const int rk = static_cast<int>((s.rowwise().sum().array() > 0).count());
        const int ck = static_cast<int>((s.colwise().sum().array() > 0).count());
        if (rk > 1 && ck > 1) out.dof += (rk - 1) * (ck - 1);
    }
    return out;
}

double chi2_survival(double x, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi2_survival: dof must be positive");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

TestResult test_independence(const CategoricalDataset& data, int x, int y, std::span<const int> z,
                             const TestConfig& cfg) {
    TestResult res;
    const double rc = static_cast<double>(data.arity(x)) * data.arity(y);
    double nominal_strata = 1.0;
    for (int v : z) nominal_strata *= data.arity(v);

    // The nominal rule can be decided before counting anything.
    if (cfg.power_cells == PowerRuleCells::nominal &&
        data.n() / (rc * nominal_strata) < cfg.power_threshold) {
        res.decided_by_power_rule = true;
        return res;
    }
    const auto table = contingency(data, x, y, z);
    if (cfg.power_cells == PowerRuleCells::observed &&
        data.n() / (rc * table.l()) < cfg.power_threshold) {
        res.decided_by_power_rule = true;
        return res;
    }
    const auto g2 = g2_statistic(table);
    res.statistic = g2.statistic;
    res.dof = g2.dof;
    if (g2.dof <= 0) return res;
    res.p_value = chi2_survival(g2.statistic, g2.dof);
    res.independent = res.p_value > cfg.alpha;
    return res;
}

}  // namespace h2pc
