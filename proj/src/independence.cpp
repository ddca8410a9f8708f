#include <h2pc/independence.hpp>

#include <algorithm>
#include <mutex>

namespace h2pc {

StatisticalSource::StatisticalSource(const CategoricalDataset& data, TestConfig cfg, bool cache)
    : data_(data), cfg_(cfg), cache_enabled_(cache) {
    cfg_.validate();
}

Decision StatisticalSource::query(int x, int y, std::span<const int> z) const {
    // Canonical argument order keeps results symmetric and bit-identical with or without the cache.
    std::vector<int> key;
    key.reserve(z.size() + 2);
    key.push_back(std::min(x, y));
    key.push_back(std::max(x, y));
    key.insert(key.end(), z.begin(), z.end());
    std::sort(key.begin() + 2, key.end());

    if (cache_enabled_) {
        std::shared_lock lock(mutex_);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const auto res = test_independence(data_, key[0], key[1], std::span<const int>(key).subspan(2), cfg_);
    const Decision decision{res.independent, res.p_value};
    if (cache_enabled_) {
        // Two workers may race to the same miss; count the test once so the
        // total does not depend on scheduling.
        std::unique_lock lock(mutex_);
        if (cache_.emplace(std::move(key), decision).second) ++tests_run_;
    } else {
        ++tests_run_;
    }
    return decision;
}

Decision DSeparationSource::query(int x, int y, std::span<const int> z) const {
    const bool sep = d_separated(g_, x, y, z);
    return {sep, sep ? 1.0 : 0.0};
}

void QueryStats::merge(const QueryStats& other) {
    calls += other.calls;
    max_condset = std::max(max_condset, other.max_condset);
}

Decision RecordingSource::query(int x, int y, std::span<const int> z) const {
    ++stats_.calls;
    stats_.max_condset = std::max(stats_.max_condset, z.size());
    return inner_.query(x, y, z);
}

}  // namespace h2pc
