#ifndef H2PC_LEARN_HPP
#define H2PC_LEARN_HPP

#include <h2pc/citest.hpp>
#include <h2pc/dataset.hpp>
#include <h2pc/score.hpp>
#include <h2pc/skeleton.hpp>

#include <cstddef>

namespace h2pc {

/// Everything the two-phase learner needs. `jobs` is copied into the
/// skeleton and search phases.
struct LearnConfig {
    TestConfig test;
    SkeletonConfig skeleton;
    ScoreConfig score;
    int jobs = 1;

    void validate() const;
};

struct LearnResult {
    Skeleton skeleton;
    SearchResult search;
    HpcStats stats;
    std::size_t tests_run = 0;
};

/// Phase 1 only: the AND-symmetrized HPC skeleton from G² tests on data.
Skeleton learn_skeleton(const CategoricalDataset& data, const LearnConfig& cfg, HpcStats* stats = nullptr,
                        std::size_t* tests_run = nullptr);

/// Skeleton, then skeleton-constrained hill climbing.
LearnResult learn_structure(const CategoricalDataset& data, const LearnConfig& cfg);

}  // namespace h2pc

#endif  // H2PC_LEARN_HPP
