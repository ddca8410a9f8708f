#ifndef H2PC_INDEPENDENCE_HPP
#define H2PC_INDEPENDENCE_HPP

#include <h2pc/citest.hpp>
#include <h2pc/dataset.hpp>
#include <h2pc/graph.hpp>

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

namespace h2pc {

struct Decision {
    bool independent = true;
    double p_value = 1.0;
};

/// Answers "is x independent of y given z?". Implementations must be symmetric
/// in x and y and safe to call from several threads.
class IndependenceSource {
public:
    virtual ~IndependenceSource() = default;
    virtual Decision query(int x, int y, std::span<const int> z) const = 0;
    virtual int d() const = 0;
};

/// The G² test on data, with an optional memo cache.
class StatisticalSource : public IndependenceSource {
public:
    StatisticalSource(const CategoricalDataset& data, TestConfig cfg, bool cache = true);

    Decision query(int x, int y, std::span<const int> z) const override;
    int d() const override { return data_.d(); }

    const TestConfig& config() const { return cfg_; }
    /// Number of distinct tests computed (every call when the cache is off).
    std::size_t tests_run() const { return tests_run_.load(); }

private:
    const CategoricalDataset& data_;
    TestConfig cfg_;
    bool cache_enabled_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::vector<int>, Decision> cache_;
    mutable std::atomic<std::size_t> tests_run_{0};
};

/// Perfect independence answers read off a DAG by d-separation.
/// p-values are 0 for dependence and 1 for independence.
class DSeparationSource : public IndependenceSource {
public:
    explicit DSeparationSource(const Dag& g) : g_(g) {}

    Decision query(int x, int y, std::span<const int> z) const override;
    int d() const override { return g_.d(); }

private:
    const Dag& g_;
};

/// Conditioning-set statistics for one phase of the local search.
struct QueryStats {
    std::size_t calls = 0;
    std::size_t max_condset = 0;

    void merge(const QueryStats& other);
};

/// Forwards to another source while recording call counts and |Z|.
/// Not thread-safe; use one per thread.
class RecordingSource : public IndependenceSource {
public:
    RecordingSource(const IndependenceSource& inner, QueryStats& stats) : inner_(inner), stats_(stats) {}

    Decision query(int x, int y, std::span<const int> z) const override;
    int d() const override { return inner_.d(); }

private:
    const IndependenceSource& inner_;
    QueryStats& stats_;
};

}  // namespace h2pc

#endif  // H2PC_INDEPENDENCE_HPP
