#include <h2pc/parallel.hpp>
#include <h2pc/skeleton.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

namespace h2pc {

Skeleton Skeleton::from_dag(const Dag& g) {
    Skeleton s(g.d());
    for (const auto& [a, b] : g.edges()) s.add_edge(a, b);
    return s;
}

void Skeleton::add_edge(int a, int b) {
    if (a == b) throw std::invalid_argument("skeleton: self-loop");
    insert(adj_[a], b);
    insert(adj_[b], a);
}

int Skeleton::edge_count() const {
    int m = 0;
    for (const auto& n : adj_) m += static_cast<int>(n.size());
    return m / 2;
}

std::vector<Edge> Skeleton::edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < d(); ++a) {
        for (int b : adj_[a]) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    return out;
}

void HpcStats::merge(const HpcStats& other) {
    pcs.merge(other.pcs);
    sps.merge(other.sps);
    iapc.merge(other.iapc);
}

PcsResult de_pcs(int target, const IndependenceSource& src, const NodeSet& universe) {
    PcsResult out;
    out.pcs = set_difference(universe, {target});

    const NodeSet candidates = out.pcs;
    for (int x : candidates) {
        if (src.query(target, x, {}).independent) {
            erase(out.pcs, x);
            out.dsep[x] = {};
        }
    }

    const NodeSet survivors = out.pcs;
    for (int x : survivors) {
        const NodeSet current = out.pcs;
        for (int y : current) {
            if (y == x) continue;
            const int z[] = {y};
            if (src.query(target, x, z).independent) {
                erase(out.pcs, x);
                out.dsep[x] = {y};
                break;
            }
        }
    }
    return out;
}

NodeSet de_sps(int target, const IndependenceSource& src, const NodeSet& universe, const PcsResult& pcs) {
    NodeSet sps;
    NodeSet outside = set_difference(universe, pcs.pcs);
    erase(outside, target);
    for (int x : pcs.pcs) {
        NodeSet spx;
        for (int y : outside) {
            const auto it = pcs.dsep.find(y);
            NodeSet z = it == pcs.dsep.end() ? NodeSet{} : it->second;
            insert(z, x);
            if (!src.query(target, y, z).independent) spx.push_back(y);
        }
        const NodeSet grown = spx;
        for (int y : grown) {
            const NodeSet current = spx;
            for (int other : current) {
                if (other == y) continue;
                const NodeSet z = make_set({x, other});
                if (src.query(target, y, z).independent) {
                    erase(spx, y);
                    break;
                }
            }
        }
        sps = set_union(sps, spx);
    }
    return sps;
}

namespace {

/// Benjamini–Hochberg step-up: marks entries whose rank is at most the largest
/// k with p_(k) ≤ k·alpha/m. Ties keep input order.
std::vector<char> bh_significant(const std::vector<double>& p, double alpha) {
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::size_t cutoff = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        if (p[order[k - 1]] <= static_cast<double>(k) * alpha / static_cast<double>(m)) cutoff = k;
    }
    std::vector<char> sig(m, 0);
    for (std::size_t k = 0; k < cutoff; ++k) sig[order[k]] = 1;
    return sig;
}

std::vector<double> boundary_pvalues(int target, const IndependenceSource& src, const NodeSet& candidates,
                                     const NodeSet& mb) {
    std::vector<double> p(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const int x = candidates[i];
        if (contains(mb, x)) {
            p[i] = src.query(target, x, set_difference(mb, {x})).p_value;
        } else {
            p[i] = src.query(target, x, mb).p_value;
        }
    }
    return p;
}

}  // namespace

NodeSet iamb_fdr(int target, const IndependenceSource& src, const NodeSet& universe, double alpha) {
    const NodeSet candidates = set_difference(universe, {target});
    NodeSet mb;
    if (candidates.empty()) return mb;
    std::set<NodeSet> visited{mb};
    while (true) {
        const NodeSet before = mb;

        auto p = boundary_pvalues(target, src, candidates, mb);
        auto sig = bh_significant(p, alpha);
        int best = -1;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!sig[i] || contains(mb, candidates[i])) continue;
            if (best < 0 || p[i] < p[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
        }
        if (best >= 0) insert(mb, candidates[static_cast<std::size_t>(best)]);

        p = boundary_pvalues(target, src, candidates, mb);
        sig = bh_significant(p, alpha);
        NodeSet kept;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (contains(mb, candidates[i]) && sig[i]) kept.push_back(candidates[i]);
        }
        mb = std::move(kept);

        if (mb == before || !visited.insert(mb).second) break;
    }
    return mb;
}

namespace {

/// Calls fn(subset) for subsets of `pool` by increasing size, lexicographic within a
/// size, until fn returns true. Returns whether fn ever returned true.
template <typename Fn>
bool any_subset(const NodeSet& pool, int max_size, Fn&& fn) {
    const int m = static_cast<int>(pool.size());
    for (int size = 0; size <= std::min(max_size, m); ++size) {
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        NodeSet z(size);
        while (true) {
            for (int i = 0; i < size; ++i) z[i] = pool[idx[i]];
            if (fn(z)) return true;
            int i = size - 1;
            while (i >= 0 && idx[i] == m - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return false;
}

}  // namespace

NodeSet fdr_iapc(int target, const IndependenceSource& src, const NodeSet& universe, double alpha,
                 std::optional<int> max_condset) {
    const NodeSet mb = iamb_fdr(target, src, universe, alpha);
    NodeSet pc = mb;
    const int cap = max_condset.value_or(static_cast<int>(mb.size()));
    for (int x : mb) {
        const NodeSet others = set_difference(mb, {x});
        const bool separable =
            any_subset(others, cap, [&](const NodeSet& z) { return src.query(target, x, z).independent; });
        if (separable) erase(pc, x);
    }
    return pc;
}

NodeSet hpc(int target, const IndependenceSource& src, const NodeSet& universe, const SkeletonConfig& cfg,
            HpcStats* stats) {
    HpcStats local;
    const RecordingSource pcs_src(src, local.pcs);
    const RecordingSource sps_src(src, local.sps);
    const RecordingSource iapc_src(src, local.iapc);

    const auto pcs = de_pcs(target, pcs_src, universe);
    const auto sps = de_sps(target, sps_src, universe, pcs);
    NodeSet restricted = set_union(pcs.pcs, sps);
    insert(restricted, target);

    NodeSet pc = fdr_iapc(target, iapc_src, restricted, cfg.alpha, cfg.max_condset);
    for (int x : set_difference(pcs.pcs, pc)) {
        if (contains(fdr_iapc(x, iapc_src, restricted, cfg.alpha, cfg.max_condset), target)) insert(pc, x);
    }
    if (stats) stats->merge(local);
    return pc;
}

std::vector<NodeSet> hpc_many(const NodeSet& targets, const IndependenceSource& src, const NodeSet& universe,
                              const SkeletonConfig& cfg, HpcStats* stats) {
    const int m = static_cast<int>(targets.size());
    std::vector<NodeSet> out(m);
    std::vector<HpcStats> per(m);
    parallel_for(m, cfg.jobs, [&](int i) { out[i] = hpc(targets[i], src, universe, cfg, &per[i]); });
    if (stats) {
        for (const auto& s : per) stats->merge(s);
    }
    return out;
}

Skeleton build_skeleton(const IndependenceSource& src, const SkeletonConfig& cfg, HpcStats* stats) {
    const int d = src.d();
    NodeSet all(d);
    std::iota(all.begin(), all.end(), 0);
    const auto pc = hpc_many(all, src, all, cfg, stats);
    Skeleton s(d);
    for (int x = 0; x < d; ++x) {
        for (int y : pc[x]) {
            if (x < y && contains(pc[y], x)) s.add_edge(x, y);
        }
    }
    return s;
}

using json = nlohmann::ordered_json;

void write_skeleton(std::ostream& out, const Skeleton& s, const std::vector<std::string>& names) {
    json doc;
    doc["nodes"] = names;
    doc["edges"] = json::array();
    for (const auto& [a, b] : s.edges()) doc["edges"].push_back({names[a], names[b]});
    doc["pc"] = json::object();
    for (int v = 0; v < s.d(); ++v) {
        std::vector<std::string> pc;
        for (int w : s.neighbors(v)) pc.push_back(names[w]);
        doc["pc"][names[v]] = pc;
    }
    out << doc.dump(2) << '\n';
}

void write_skeleton(const std::filesystem::path& path, const Skeleton& s, const std::vector<std::string>& names) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_skeleton(out, s, names);
}

Skeleton read_skeleton(const std::filesystem::path& path, const std::vector<std::string>& names) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("skeleton JSON: ") + e.what());
    }
    auto index_of = [&](const std::string& n) {
        const auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) throw DataError("skeleton references unknown node '" + n + "'");
        return static_cast<int>(it - names.begin());
    };
    Skeleton s(static_cast<int>(names.size()));
    for (const auto& e : doc.at("edges")) s.add_edge(index_of(e.at(0)), index_of(e.at(1)));
    return s;
}

}  // namespace h2pc
