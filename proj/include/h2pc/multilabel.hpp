#ifndef H2PC_MULTILABEL_HPP
#define H2PC_MULTILABEL_HPP

#include <h2pc/dataset.hpp>
#include <h2pc/graph.hpp>
#include <h2pc/learn.hpp>

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace h2pc {

/// Connected components of the label graph in which two labels are linked
/// when they are adjacent in g or share a non-label child. Blocks are sorted
/// by their smallest member.
std::vector<NodeSet> minimal_label_powersets(const Dag& g, const NodeSet& labels);

/// Union of parents, children and spouses of the block members, minus every label.
NodeSet powerset_markov_boundary(const Dag& g, const NodeSet& block, const NodeSet& labels);

/// Naive Bayes over a feature subset whose class is the joint value of a label block.
struct PowersetClassifier {
    NodeSet block;
    NodeSet features;
    /// Label combinations seen in training, in lexicographic order.
    std::vector<std::vector<Level>> classes;
    Eigen::VectorXd log_prior;
    /// One arity × classes matrix of log-likelihoods per feature.
    std::vector<Eigen::MatrixXd> log_likelihood;

    int class_count() const { return static_cast<int>(classes.size()); }
    /// Unnormalized log posterior of every class for one row.
    Eigen::VectorXd class_scores(const CategoricalDataset& data, int row) const;
    /// Highest-scoring class; ties go to the lower index.
    int predict(const CategoricalDataset& data, int row) const;
};

/// Laplace-smoothed estimates with `smoothing` added to every count.
PowersetClassifier fit_powerset_classifier(const CategoricalDataset& train, const NodeSet& block,
                                           const NodeSet& features, double smoothing = 1.0);

/// Row of label values, ordered like `labels`, assembled from each block's argmax.
std::vector<Level> predict_mpe(const std::vector<PowersetClassifier>& classifiers, const NodeSet& labels,
                               const CategoricalDataset& data, int row);

/// rows × |labels| predictions for every row of data.
Eigen::MatrixXi predict_mpe(const std::vector<PowersetClassifier>& classifiers, const NodeSet& labels,
                            const CategoricalDataset& data);

/// Label columns of data as an integer matrix.
Eigen::MatrixXi label_matrix(const CategoricalDataset& data, const NodeSet& labels);

/// Fraction of rows predicted correctly on every label.
double global_accuracy(const Eigen::MatrixXi& pred, const Eigen::MatrixXi& truth);

enum class Scenario { br, br_mb, mlp, mlp_mb };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

/// A multi-label dataset. Columns listed in `numeric` hold raw values that are
/// re-split at the training median inside every fold.
struct MlcProblem {
    CategoricalDataset data;
    NodeSet labels;
    std::map<int, std::vector<double>> numeric;

    NodeSet features() const;
};

struct MlcConfig {
    int folds = 10;
    std::uint64_t seed = 0;
    LearnConfig learn;
    double smoothing = 1.0;
    int jobs = 1;
};

/// Structure learned around the labels: HPC on the labels, then on their
/// neighbours, and hill climbing over labels ∪ both rings. Returned over all
/// variables of data; nodes outside the rings are isolated.
Dag learn_local_dag(const CategoricalDataset& train, const NodeSet& labels, const LearnConfig& cfg);

struct FoldReport {
    int fold = 0;
    int train_rows = 0;
    int test_rows = 0;
    std::vector<NodeSet> blocks;
    std::vector<NodeSet> features;
    std::vector<int> classes;
    double accuracy = 0.0;
    double seconds = 0.0;
};

struct MlcReport {
    Scenario scenario = Scenario::br;
    std::vector<FoldReport> folds;
    double mean_accuracy = 0.0;
    /// Sample standard deviation across folds.
    double sd_accuracy = 0.0;
    double mean_blocks = 0.0;
    /// Min, median and max over every block of every fold.
    std::array<double, 3> labels_per_block{};
    std::array<double, 3> classes_per_block{};
};

/// The given rows, with numeric columns split at the median of their values
/// over train_rows.
CategoricalDataset discretize_fold(const MlcProblem& problem, std::span<const int> train_rows,
                                   std::span<const int> rows);

/// k-fold cross-validation of one scenario. With export_dir set, also writes
/// fold<k>/block<j>_{train,test}.csv (the block's features plus one joint
/// class column) so that other learners can be plugged in.
MlcReport run_scenario(const MlcProblem& problem, Scenario scenario, const MlcConfig& cfg,
                       const std::optional<std::filesystem::path>& export_dir = std::nullopt);

}  // namespace h2pc

#endif  // H2PC_MULTILABEL_HPP
