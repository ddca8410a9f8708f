#ifndef H2PC_CITEST_HPP
#define H2PC_CITEST_HPP

#include <h2pc/dataset.hpp>

#include <span>

namespace h2pc {

/// How the power rule counts cells in the average-sample-per-cell check.
enum class PowerRuleCells {
    nominal,   ///< r · c · (product of conditioning arities)
    observed,  ///< r · c · (number of conditioning configurations seen in the data)
};

struct TestConfig {
    double alpha = 0.05;
    double power_threshold = 5.0;
    PowerRuleCells power_cells = PowerRuleCells::nominal;

    void validate() const;
};

struct TestResult {
    double p_value = 1.0;
    double statistic = 0.0;
    int dof = 0;
    bool decided_by_power_rule = false;
    bool independent = true;
};

/// Conditional mutual information in nats; zero-count cells contribute nothing.
double mutual_information(const ContingencyTable& table);

struct G2 {
    double statistic = 0.0;
    int dof = 0;
};

/// G² = 2n·MI with degrees of freedom summed per stratum after dropping
/// all-zero rows and columns of that stratum.
G2 g2_statistic(const ContingencyTable& table);

/// Upper tail P(χ²_dof ≥ x). dof must be positive.
double chi2_survival(double x, int dof);

TestResult test_independence(const CategoricalDataset& data, int x, int y, std::span<const int> z,
                             const TestConfig& cfg);

}  // namespace h2pc

#endif  // H2PC_CITEST_HPP
