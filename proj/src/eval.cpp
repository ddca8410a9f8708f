#include <h2pc/eval.hpp>

#include <cmath>
#include <stdexcept>

namespace h2pc {

SkeletonMetrics skeleton_metrics(const Skeleton& learned, const Skeleton& truth) {
    if (learned.d() != truth.d()) throw std::invalid_argument("skeleton_metrics: node sets differ");
    SkeletonMetrics m;
    for (const auto& [a, b] : learned.edges()) {
        if (truth.has_edge(a, b)) {
            ++m.tp;
        } else {
            ++m.fp;
        }
    }
    m.fn = truth.edge_count() - m.tp;
    const double d = truth.d();
    const double non_edges = d * (d - 1) / 2 - truth.edge_count();
    m.precision = m.tp + m.fp == 0 ? 1.0 : static_cast<double>(m.tp) / (m.tp + m.fp);
    m.recall = m.tp + m.fn == 0 ? 1.0 : static_cast<double>(m.tp) / (m.tp + m.fn);
    m.fpr = non_edges == 0 ? 0.0 : m.fp / non_edges;
    m.euclidean = std::hypot(1.0 - m.precision, 1.0 - m.recall);
    return m;
}

namespace {

bool undirected(const Pdag& p, int a, int b) { return p.has_undirected(a, b); }

bool meek_pass(Pdag& p) {
    const int d = p.d();
    bool changed = false;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (a == b || !undirected(p, a, b)) continue;
            bool orient = false;
            for (int c = 0; c < d && !orient; ++c) {
                if (c == a || c == b) continue;
                // R1: c -> a - b, c and b non-adjacent.
                if (p.has_directed(c, a) && !p.adjacent(c, b)) orient = true;
                // R2: a -> c -> b with a - b.
                else if (p.has_directed(a, c) && p.has_directed(c, b)) orient = true;
            }
            // R3: a - c -> b, a - e -> b, c and e non-adjacent.
            for (int c = 0; c < d && !orient; ++c) {
                if (c == a || c == b || !undirected(p, a, c) || !p.has_directed(c, b)) continue;
                for (int e = c + 1; e < d && !orient; ++e) {
                    if (e == a || e == b || !undirected(p, a, e) || !p.has_directed(e, b)) continue;
                    if (!p.adjacent(c, e)) orient = true;
                }
            }
            // R4: a - c -> e -> b, a adjacent to e, c and b non-adjacent.
            for (int c = 0; c < d && !orient; ++c) {
                if (c == a || c == b || !undirected(p, a, c)) continue;
                for (int e = 0; e < d && !orient; ++e) {
                    if (e == a || e == b || e == c) continue;
                    if (p.has_directed(c, e) && p.has_directed(e, b) && p.adjacent(a, e) && !p.adjacent(c, b)) {
                        orient = true;
                    }
                }
            }
            if (orient) {
                p.orient(a, b);
                changed = true;
            }
        }
    }
    return changed;
}

}  // namespace

Pdag dag_to_cpdag(const Dag& g) {
    const int d = g.d();
    Pdag p(d);
    for (const auto& [a, b] : g.edges()) p.add_undirected(a, b);
    for (int c = 0; c < d; ++c) {
        const auto& pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (g.adjacent(pa[i], pa[j])) continue;
                if (!p.has_directed(pa[i], c)) p.orient(pa[i], c);
                if (!p.has_directed(pa[j], c)) p.orient(pa[j], c);
            }
        }
    }
    while (meek_pass(p)) {
    }
    return p;
}

int shd(const Pdag& a, const Pdag& b) {
    if (a.d() != b.d()) throw std::invalid_argument("shd: node sets differ");
    int dist = 0;
    for (int x = 0; x < a.d(); ++x) {
        for (int y = x + 1; y < a.d(); ++y) {
            const bool adj_a = a.adjacent(x, y);
            if (adj_a != b.adjacent(x, y)) {
                ++dist;
            } else if (adj_a && (a.has_undirected(x, y) != b.has_undirected(x, y) ||
                                 a.has_directed(x, y) != b.has_directed(x, y))) {
                ++dist;
            }
        }
    }
    return dist;
}

HoldoutScores holdout_scores(const Dag& g, const CategoricalDataset& train, const CategoricalDataset& test,
                             double ess) {
    if (train.d() != g.d() || test.d() != g.d()) throw DataError("holdout_scores: variable count differs from graph");
    for (int v = 0; v < g.d(); ++v) {
        if (train.name(v) != test.name(v) || train.arity(v) != test.arity(v)) {
            throw DataError("holdout_scores: variable '" + train.name(v) + "' differs between datasets");
        }
    }
    ScoreConfig bdeu;
    bdeu.ess = ess;
    ScoreConfig bic;
    bic.score = ScoreType::bic;
    return {total_score(train, g, bdeu), total_score(train, g, bic), total_score(test, g, bdeu),
            total_score(test, g, bic)};
}

}  // namespace h2pc
