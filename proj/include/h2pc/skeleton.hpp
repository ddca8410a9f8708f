#ifndef H2PC_SKELETON_HPP
#define H2PC_SKELETON_HPP

#include <h2pc/graph.hpp>
#include <h2pc/independence.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h2pc {

/// Output of DE-PCS: a superset of the target's parents and children, plus the
/// separating set (empty or a singleton) recorded for every removed variable.
struct PcsResult {
    NodeSet pcs;
    std::map<int, NodeSet> dsep;
};

/// Undirected graph; neighbors(v) is the PC set of v.
class Skeleton {
public:
    Skeleton() = default;
    explicit Skeleton(int d) : adj_(d) {}
    static Skeleton from_dag(const Dag& g);

    int d() const { return static_cast<int>(adj_.size()); }
    void add_edge(int a, int b);
    bool has_edge(int a, int b) const { return contains(adj_[a], b); }
    const NodeSet& neighbors(int v) const { return adj_[v]; }
    int edge_count() const;
    /// Pairs with first < second, sorted.
    std::vector<Edge> edges() const;

    friend bool operator==(const Skeleton&, const Skeleton&) = default;

private:
    std::vector<NodeSet> adj_;
};

struct SkeletonConfig {
    /// Level of the Benjamini–Hochberg step-up inside IAMBFDR.
    double alpha = 0.05;
    /// Cap on |Z| in the FDR-IAPC spouse-removal search.
    std::optional<int> max_condset;
    int jobs = 1;
};

/// Per-phase query statistics of one or more HPC runs.
struct HpcStats {
    QueryStats pcs;
    QueryStats sps;
    QueryStats iapc;

    void merge(const HpcStats& other);
    std::size_t calls() const { return pcs.calls + sps.calls + iapc.calls; }
};

/// DE-PCS: drop variables independent of the target marginally (phase I) or
/// given one other surviving candidate (phase II). Conditioning sets have |Z| ≤ 1.
PcsResult de_pcs(int target, const IndependenceSource& src, const NodeSet& universe);

/// DE-SPS: spouse superset. For each X in PCS, admit Y with T ⫫̸ Y | dSep(Y) ∪ {X},
/// then drop Y if T ⫫ Y | {X, Z} for another admitted Z. |Z| ≤ 2.
NodeSet de_sps(int target, const IndependenceSource& src, const NodeSet& universe, const PcsResult& pcs);

/// Incremental association Markov boundary with FDR control.
///
/// Every sweep computes the p-value of each non-target variable against the
/// target given the current boundary (minus itself for members) and runs a
/// Benjamini–Hochberg step-up at level alpha over all of them. The most
/// significant non-member that passes is admitted (ties go to the lower
/// index); then p-values are recomputed and members that no longer pass are
/// removed. Stops when a sweep changes nothing or revisits a boundary.
NodeSet iamb_fdr(int target, const IndependenceSource& src, const NodeSet& universe, double alpha);

/// FDR-IAPC: iamb_fdr followed by removal of every X with T ⫫ X | Z for some
/// Z ⊆ MB \ {X} (smallest subsets first, |Z| capped by max_condset).
NodeSet fdr_iapc(int target, const IndependenceSource& src, const NodeSet& universe, double alpha,
                 std::optional<int> max_condset = std::nullopt);

/// HPC: PC set of the target within `universe`.
NodeSet hpc(int target, const IndependenceSource& src, const NodeSet& universe, const SkeletonConfig& cfg,
            HpcStats* stats = nullptr);

/// Runs HPC for each target (in parallel when cfg.jobs > 1). Results are indexed like `targets`.
std::vector<NodeSet> hpc_many(const NodeSet& targets, const IndependenceSource& src, const NodeSet& universe,
                              const SkeletonConfig& cfg, HpcStats* stats = nullptr);

/// Skeleton over all variables of the source: X–Y iff X ∈ HPC(Y) and Y ∈ HPC(X).
Skeleton build_skeleton(const IndependenceSource& src, const SkeletonConfig& cfg, HpcStats* stats = nullptr);

void write_skeleton(std::ostream& out, const Skeleton& s, const std::vector<std::string>& names);
void write_skeleton(const std::filesystem::path& path, const Skeleton& s, const std::vector<std::string>& names);
/// Node names in the file are mapped onto `names`; unknown names are errors.
Skeleton read_skeleton(const std::filesystem::path& path, const std::vector<std::string>& names);

}  // namespace h2pc

#endif  // H2PC_SKELETON_HPP
