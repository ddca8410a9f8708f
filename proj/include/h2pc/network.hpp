#ifndef H2PC_NETWORK_HPP
#define H2PC_NETWORK_HPP

#include <h2pc/dataset.hpp>
#include <h2pc/graph.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace h2pc {

/// A DAG over discrete variables with one conditional probability table per node.
///
/// cpt(v) is arity(v) × q, where q is the product of parent arities. Column j is
/// the distribution of v under parent configuration j, a mixed-radix code over
/// parents(v) in ascending index order with the last parent varying fastest.
class BayesianNetwork {
public:
    BayesianNetwork() = default;
    /// Validates dimensions and column sums (tolerance 1e-9).
    /// In JSON, a node's CPT is a flat array with one block of arity
    /// probabilities per parent configuration, configurations enumerated
    /// with the last listed parent varying fastest.
    BayesianNetwork(std::vector<Variable> variables, Dag graph, std::vector<Eigen::MatrixXd> cpts);

    int d() const { return graph_.d(); }
    const Dag& graph() const { return graph_; }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(int v) const { return variables_[v]; }
    int arity(int v) const { return variables_[v].arity(); }
    const Eigen::MatrixXd& cpt(int v) const { return cpts_[v]; }
    std::vector<std::string> names() const;

    /// Parent-configuration column for node v in the given full assignment.
    Eigen::Index parent_config(int v, std::span<const Level> assignment) const;

    friend bool operator==(const BayesianNetwork&, const BayesianNetwork&) = default;

private:
    std::vector<Variable> variables_;
    Dag graph_;
    std::vector<Eigen::MatrixXd> cpts_;
};

/// Checks every CPT column sums to one within tol; throws DataError naming the node.
void validate_cpts(const std::vector<Variable>& variables, const Dag& graph,
                   const std::vector<Eigen::MatrixXd>& cpts, double tol);

/// Ancestral sampling from one generator seeded by `seed`. Draws are consumed
/// node by node in topological order, and within a node row by row.
CategoricalDataset forward_sample(const BayesianNetwork& net, int n, std::uint64_t seed);

/// Maximum-likelihood CPTs with an additive pseudo-count (0 for plain ML).
/// Parent configurations never observed get the uniform distribution.
BayesianNetwork fit_parameters(const Dag& graph, const CategoricalDataset& data, double pseudo_count = 0.0);

BayesianNetwork read_network(std::istream& in);
BayesianNetwork read_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const BayesianNetwork& net);
void write_network(const std::filesystem::path& path, const BayesianNetwork& net);

}  // namespace h2pc

#endif  // H2PC_NETWORK_HPP
