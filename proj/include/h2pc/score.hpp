#ifndef H2PC_SCORE_HPP
#define H2PC_SCORE_HPP

#include <h2pc/dataset.hpp>
#include <h2pc/graph.hpp>
#include <h2pc/skeleton.hpp>

#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace h2pc {

enum class ScoreType { bdeu, bic };

ScoreType parse_score_type(const std::string& name);
std::string to_string(ScoreType t);

struct ScoreConfig {
    ScoreType score = ScoreType::bdeu;
    /// Equivalent sample size of the BDeu prior.
    double ess = 10.0;
    int tabu_length = 100;
    /// Search stops after this many moves without beating the best score seen.
    int patience = 15;
    int jobs = 1;

    void validate() const;
};

/// BDeu local score of node given parents, in nats.
double bdeu_local(const CategoricalDataset& data, int node, std::span<const int> parents, double ess);

/// Maximized log-likelihood minus (ln n / 2)·q·(r − 1).
double bic_local(const CategoricalDataset& data, int node, std::span<const int> parents);

/// Local scores memoized by (node, sorted parent set). Thread-safe.
class LocalScorer {
public:
    LocalScorer(const CategoricalDataset& data, ScoreType type, double ess, bool cache = true);

    double local(int node, const NodeSet& parents) const;
    double total(const Dag& g) const;
    const CategoricalDataset& data() const { return data_; }

private:
    const CategoricalDataset& data_;
    ScoreType type_;
    double ess_;
    bool cache_enabled_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::pair<int, NodeSet>, double> cache_;
};

/// Sum of local scores over all nodes of g.
double total_score(const CategoricalDataset& data, const Dag& g, const ScoreConfig& cfg);

enum class MoveKind { add = 0, remove = 1, reverse = 2 };

struct SearchResult {
    Dag dag;
    double score = 0.0;
    double initial_score = 0.0;
    int moves = 0;
    int improvements = 0;
    std::vector<double> trace;  ///< Score after each applied move.
};

/// Skeleton-constrained greedy hill climbing with a TABU list.
///
/// Starts from the empty graph. Each step evaluates every add (only along
/// skeleton edges), delete and reverse that keeps the graph acyclic, and
/// applies the best one whose resulting structure is not among the last
/// tabu_length structures visited, even if it lowers the score. Equal deltas
/// are resolved by (kind, source, target). Stops after `patience` moves
/// without improving on the best score seen, or when no move is available,
/// and returns the best structure visited.
SearchResult hill_climb(const CategoricalDataset& data, const Skeleton& skeleton, const ScoreConfig& cfg);

}  // namespace h2pc

#endif  // H2PC_SCORE_HPP
