#ifndef H2PC_EVAL_HPP
#define H2PC_EVAL_HPP

#include <h2pc/dataset.hpp>
#include <h2pc/graph.hpp>
#include <h2pc/score.hpp>
#include <h2pc/skeleton.hpp>

namespace h2pc {

struct SkeletonMetrics {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 1.0;
    double recall = 1.0;
    double fpr = 0.0;
    /// Distance from the perfect corner (precision 1, recall 1).
    double euclidean = 0.0;
};

/// Compares unordered edge sets. An empty output has precision 1; with no
/// true edges recall is 1, and with no true non-edges fpr is 0.
SkeletonMetrics skeleton_metrics(const Skeleton& learned, const Skeleton& truth);

/// Pattern of the Markov equivalence class of g: v-structures oriented, then
/// closed under Meek's four rules; everything else stays undirected.
Pdag dag_to_cpdag(const Dag& g);

/// One unit per node pair whose adjacency or edge mark differs.
int shd(const Pdag& a, const Pdag& b);

struct HoldoutScores {
    double bdeu_train = 0.0;
    double bic_train = 0.0;
    double bdeu_test = 0.0;
    double bic_test = 0.0;
};

/// BDeu and BIC of a fixed structure on both datasets. The datasets must
/// share variable names and arities with each other and with g.
HoldoutScores holdout_scores(const Dag& g, const CategoricalDataset& train, const CategoricalDataset& test,
                             double ess = 10.0);

}  // namespace h2pc

#endif  // H2PC_EVAL_HPP
