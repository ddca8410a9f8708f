#include <h2pc/parallel.hpp>
#include <h2pc/score.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace h2pc {

ScoreType parse_score_type(const std::string& name) {
    if (name == "bdeu") return ScoreType::bdeu;
    if (name == "bic") return ScoreType::bic;
    throw std::invalid_argument("unknown score '" + name + "' (expected bdeu or bic)");
}

std::string to_string(ScoreType t) { return t == ScoreType::bdeu ? "bdeu" : "bic"; }

void ScoreConfig::validate() const {
    if (!(ess > 0.0)) throw std::invalid_argument("ess must be positive");
    if (tabu_length < 0) throw std::invalid_argument("tabu length must be >= 0");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

namespace {

/// Counts n_jk for each observed parent configuration j (ascending code order).
struct FamilyCounts {
    double q = 1.0;  // nominal number of parent configurations
    std::vector<Eigen::VectorX<std::int64_t>> configs;
};

FamilyCounts family_counts(const CategoricalDataset& data, int node, std::span<const int> parents) {
    for (int p : parents) {
        if (p == node) throw std::invalid_argument("node cannot be its own parent");
    }
    FamilyCounts fc;
    const int r = data.arity(node);
    const auto col = data.column(node);
    if (parents.empty()) {
        fc.configs.emplace_back(Eigen::VectorX<std::int64_t>::Zero(r));
        for (int i = 0; i < data.n(); ++i) ++fc.configs.back()(col(i));
        return fc;
    }
    std::vector<std::uint64_t> codes;
    fc.q = configuration_codes(data, parents, codes);
    std::vector<std::uint64_t> keys(codes);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    fc.configs.assign(keys.size(), Eigen::VectorX<std::int64_t>::Zero(r));
    for (int i = 0; i < data.n(); ++i) {
        const auto j = std::lower_bound(keys.begin(), keys.end(), codes[i]) - keys.begin();
        ++fc.configs[static_cast<std::size_t>(j)](col(i));
    }
    return fc;
}

double lgamma(double x) { return boost::math::lgamma(x); }

}  // namespace

double bdeu_local(const CategoricalDataset& data, int node, std::span<const int> parents, double ess) {
    const auto fc = family_counts(data, node, parents);
    const double r = data.arity(node);
    const double a_j = ess / fc.q;
    const double a_jk = ess / (fc.q * r);
    const double lg_aj = lgamma(a_j);
    const double lg_ajk = lgamma(a_jk);
    double score = 0.0;
    for (const auto& counts : fc.configs) {
        const auto n_j = static_cast<double>(counts.sum());
        score += lg_aj - lgamma(a_j + n_j);
        for (Eigen::Index k = 0; k < counts.size(); ++k) {
            if (counts(k) > 0) score += lgamma(a_jk + static_cast<double>(counts(k))) - lg_ajk;
        }
    }
    return score;
}

double bic_local(const CategoricalDataset& data, int node, std::span<const int> parents) {
    const auto fc = family_counts(data, node, parents);
    const double r = data.arity(node);
    double loglik = 0.0;
    for (const auto& counts : fc.configs) {
        const auto n_j = static_cast<double>(counts.sum());
        for (Eigen::Index k = 0; k < counts.size(); ++k) {
            if (counts(k) > 0) {
                const auto n_jk = static_cast<double>(counts(k));
                loglik += n_jk * std::log(n_jk / n_j);
            }
        }
    }
    return loglik - 0.5 * std::log(static_cast<double>(data.n())) * fc.q * (r - 1.0);
}

LocalScorer::LocalScorer(const CategoricalDataset& data, ScoreType type, double ess, bool cache)
    : data_(data), type_(type), ess_(ess), cache_enabled_(cache) {}

double LocalScorer::local(int node, const NodeSet& parents) const {
    if (cache_enabled_) {
        std::shared_lock lock(mutex_);
        const auto it = cache_.find({node, parents});
        if (it != cache_.end()) return it->second;
    }
    const double s = type_ == ScoreType::bdeu ? bdeu_local(data_, node, parents, ess_) : bic_local(data_, node, parents);
    if (cache_enabled_) {
        std::unique_lock lock(mutex_);
        cache_.emplace(std::make_pair(node, parents), s);
    }
    return s;
}

double LocalScorer::total(const Dag& g) const {
    double s = 0.0;
    for (int v = 0; v < g.d(); ++v) s += local(v, g.parents(v));
    return s;
}

double total_score(const CategoricalDataset& data, const Dag& g, const ScoreConfig& cfg) {
    if (g.d() != data.d()) throw std::invalid_argument("total_score: graph and data sizes differ");
    return LocalScorer(data, cfg.score, cfg.ess, false).total(g);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Move {
    MoveKind kind;
    int from;
    int to;
    double delta = 0.0;
};

/// Visited structures, identified by an XOR hash of per-edge keys and compared
/// exactly on hash match.
class TabuList {
public:
    TabuList(int d, int capacity) : d_(d), capacity_(capacity) {}

    std::uint64_t edge_key(int a, int b) const {
        return splitmix64(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(d_) +
                          static_cast<std::uint64_t>(b));
    }

    std::uint64_t hash(const Dag& g) const {
        std::uint64_t h = 0;
        for (const auto& [a, b] : g.edges()) h ^= edge_key(a, b);
        return h;
    }

    bool contains(std::uint64_t h, const std::vector<Edge>& edges) const {
        for (const auto& [eh, ee] : entries_) {
            if (eh == h && ee == edges) return true;
        }
        return false;
    }

    bool maybe_contains(std::uint64_t h) const {
        return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == h; });
    }

    void push(std::uint64_t h, std::vector<Edge> edges) {
        if (capacity_ == 0) return;
        entries_.emplace_back(h, std::move(edges));
        if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
    }

private:
    int d_;
    int capacity_;
    std::deque<std::pair<std::uint64_t, std::vector<Edge>>> entries_;
};

std::uint64_t moved_hash(const TabuList& tabu, std::uint64_t h, const Move& m) {
    switch (m.kind) {
        case MoveKind::add:
            return h ^ tabu.edge_key(m.from, m.to);
        case MoveKind::remove:
            return h ^ tabu.edge_key(m.from, m.to);
        case MoveKind::reverse:
            return h ^ tabu.edge_key(m.from, m.to) ^ tabu.edge_key(m.to, m.from);
    }
    return h;
}

void apply(Dag& g, const Move& m) {
    switch (m.kind) {
        case MoveKind::add:
            g.add_edge(m.from, m.to);
            break;
        case MoveKind::remove:
            g.remove_edge(m.from, m.to);
            break;
        case MoveKind::reverse:
            g.reverse_edge(m.from, m.to);
            break;
    }
}

// Score-equivalent moves differ only by rounding, so differences below this
// relative tolerance count as ties. Without it, summation order (and hence the
// level coding of the data) would decide between equivalent moves.
double tie_tolerance(double score) { return 1e-10 * std::max(1.0, std::abs(score)); }

bool improves(double score, double best) { return score > best + tie_tolerance(best); }

}  // namespace

SearchResult hill_climb(const CategoricalDataset& data, const Skeleton& skeleton, const ScoreConfig& cfg) {
    cfg.validate();
    const int d = data.d();
    if (skeleton.d() != d) throw std::invalid_argument("hill_climb: skeleton does not cover the variables");

    const LocalScorer scorer(data, cfg.score, cfg.ess);
    Dag g(d);
    std::vector<double> local(d);
    for (int v = 0; v < d; ++v) local[v] = scorer.local(v, {});
    auto current_score = [&] {
        double s = 0.0;
        for (double x : local) s += x;
        return s;
    };

    TabuList tabu(d, cfg.tabu_length);
    std::uint64_t h = tabu.hash(g);
    tabu.push(h, {});

    SearchResult res;
    res.initial_score = current_score();
    res.dag = g;
    res.score = res.initial_score;
    int stale = 0;

    std::vector<Move> moves;
    while (stale < cfg.patience) {
        moves.clear();
        for (int a = 0; a < d; ++a) {
            for (int b : skeleton.neighbors(a)) {
                if (g.can_add(a, b)) moves.push_back({MoveKind::add, a, b});
            }
        }
        for (const auto& [a, b] : g.edges()) moves.push_back({MoveKind::remove, a, b});
        for (const auto& [a, b] : g.edges()) {
            if (g.can_reverse(a, b)) moves.push_back({MoveKind::reverse, a, b});
        }
        if (moves.empty()) break;

        parallel_for(static_cast<int>(moves.size()), cfg.jobs, [&](int i) {
            auto& m = moves[static_cast<std::size_t>(i)];
            NodeSet pa_to = g.parents(m.to);
            switch (m.kind) {
                case MoveKind::add:
                    insert(pa_to, m.from);
                    m.delta = scorer.local(m.to, pa_to) - local[m.to];
                    break;
                case MoveKind::remove:
                    erase(pa_to, m.from);
                    m.delta = scorer.local(m.to, pa_to) - local[m.to];
                    break;
                case MoveKind::reverse: {
                    erase(pa_to, m.from);
                    NodeSet pa_from = g.parents(m.from);
                    insert(pa_from, m.to);
                    m.delta = scorer.local(m.to, pa_to) - local[m.to] + scorer.local(m.from, pa_from) -
                              local[m.from];
                    break;
                }
            }
        });

        // Moves are generated in (kind, from, to) order, so the first maximum wins ties.
        const double tol = tie_tolerance(current_score());
        const Move* best = nullptr;
        std::uint64_t best_hash = 0;
        for (const auto& m : moves) {
            if (best && !(m.delta > best->delta + tol)) continue;
            const auto mh = moved_hash(tabu, h, m);
            if (tabu.maybe_contains(mh)) {
                Dag trial = g;
                apply(trial, m);
                if (tabu.contains(mh, trial.edges())) continue;
            }
            best = &m;
            best_hash = mh;
        }
        if (!best) break;

        apply(g, *best);
        h = best_hash;
        local[best->to] = scorer.local(best->to, g.parents(best->to));
        if (best->kind == MoveKind::reverse) local[best->from] = scorer.local(best->from, g.parents(best->from));
        tabu.push(h, g.edges());

        const double score = current_score();
        ++res.moves;
        res.trace.push_back(score);
        if (improves(score, res.score)) {
            res.score = score;
            res.dag = g;
            ++res.improvements;
            stale = 0;
        } else {
            ++stale;
        }
    }
    return res;
}

}  // namespace h2pc
