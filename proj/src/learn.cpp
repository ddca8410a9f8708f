#include <h2pc/learn.hpp>

namespace h2pc {

void LearnConfig::validate() const {
    test.validate();
    score.validate();
    if (!(skeleton.alpha > 0.0 && skeleton.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
    if (skeleton.max_condset && *skeleton.max_condset < 0) throw std::invalid_argument("max condset must be >= 0");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

Skeleton learn_skeleton(const CategoricalDataset& data, const LearnConfig& cfg, HpcStats* stats,
                        std::size_t* tests_run) {
    cfg.validate();
    const StatisticalSource src(data, cfg.test);
    SkeletonConfig sk = cfg.skeleton;
    sk.jobs = cfg.jobs;
    Skeleton s = build_skeleton(src, sk, stats);
    if (tests_run) *tests_run = src.tests_run();
    return s;
}

LearnResult learn_structure(const CategoricalDataset& data, const LearnConfig& cfg) {
    LearnResult out;
    out.skeleton = learn_skeleton(data, cfg, &out.stats, &out.tests_run);
    ScoreConfig sc = cfg.score;
    sc.jobs = cfg.jobs;
    out.search = hill_climb(data, out.skeleton, sc);
    return out;
}

}  // namespace h2pc
