// Random graphs, networks and datasets shared by the test binaries.
#ifndef H2PC_TESTS_SUPPORT_HPP
#define H2PC_TESTS_SUPPORT_HPP

#include <h2pc/dataset.hpp>
#include <h2pc/graph.hpp>
#include <h2pc/network.hpp>
#include <h2pc/random.hpp>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#ifndef H2PC_DATA_DIR
#define H2PC_DATA_DIR "data"
#endif

namespace testing {

using namespace h2pc;

inline std::string data_path(const std::string& file) { return std::string(H2PC_DATA_DIR) + "/" + file; }

/// Random DAG: nodes are placed in a random order and each picks up to
/// max_parents earlier nodes, each candidate kept with probability p.
inline Dag random_dag(Rng& rng, int d, int max_parents, double p) {
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    shuffle(std::span<int>(order), rng);
    Dag g(d);
    for (int i = 1; i < d; ++i) {
        std::vector<int> earlier(order.begin(), order.begin() + i);
        shuffle(std::span<int>(earlier), rng);
        int added = 0;
        for (int u : earlier) {
            if (added == max_parents) break;
            if (uniform01(rng) < p) {
                g.add_edge(u, order[i]);
                ++added;
            }
        }
    }
    return g;
}

inline std::vector<Variable> make_variables(const std::vector<int>& arities) {
    std::vector<Variable> vars;
    for (std::size_t j = 0; j < arities.size(); ++j) {
        Variable v{"V" + std::to_string(j), {}};
        for (int k = 0; k < arities[j]; ++k) v.levels.push_back("l" + std::to_string(k));
        vars.push_back(v);
    }
    return vars;
}

/// CPTs where each parent pulls the child towards the level equal to its own
/// (mod arity), plus noise: every edge has a marginal effect.
inline BayesianNetwork copy_network(Rng& rng, const Dag& g, const std::vector<int>& arities, double strength) {
    std::vector<Eigen::MatrixXd> cpts;
    for (int v = 0; v < g.d(); ++v) {
        const auto& pa = g.parents(v);
        int q = 1;
        for (int p : pa) q *= arities[p];
        Eigen::MatrixXd cpt(arities[v], q);
        for (int j = 0; j < q; ++j) {
            int code = j;
            std::vector<int> levels(pa.size());
            for (int i = static_cast<int>(pa.size()) - 1; i >= 0; --i) {
                levels[i] = code % arities[pa[i]];
                code /= arities[pa[i]];
            }
            Eigen::VectorXd logit(arities[v]);
            for (int k = 0; k < arities[v]; ++k) logit(k) = 0.3 * (uniform01(rng) - 0.5);
            for (int l : levels) logit(l % arities[v]) += strength;
            const Eigen::VectorXd e = (logit.array() - logit.maxCoeff()).exp();
            cpt.col(j) = e / e.sum();
        }
        cpts.push_back(cpt);
    }
    return BayesianNetwork(make_variables(arities), g, cpts);
}

/// Independent uniform columns.
inline CategoricalDataset uniform_dataset(Rng& rng, int n, const std::vector<int>& arities) {
    LevelMatrix cells(n, static_cast<Eigen::Index>(arities.size()));
    for (Eigen::Index j = 0; j < cells.cols(); ++j) {
        for (int i = 0; i < n; ++i) cells(i, j) = static_cast<Level>(uniform_below(rng, arities[j]));
    }
    return CategoricalDataset(make_variables(arities), cells);
}

inline CategoricalDataset dataset_from_rows(const std::vector<std::vector<int>>& rows, const std::vector<int>& arities) {
    LevelMatrix cells(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(arities.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < arities.size(); ++j) cells(i, j) = rows[i][j];
    }
    return CategoricalDataset(make_variables(arities), cells);
}

inline std::vector<int> all_nodes(int d) {
    std::vector<int> v(d);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace testing

#endif  // H2PC_TESTS_SUPPORT_HPP
