#ifndef H2PC_GRAPH_HPP
#define H2PC_GRAPH_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace h2pc {

/// Sorted, duplicate-free list of node indices.
using NodeSet = std::vector<int>;
using Edge = std::pair<int, int>;

NodeSet make_set(std::vector<int> nodes);
bool contains(const NodeSet& s, int v);
NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);
void insert(NodeSet& s, int v);
void erase(NodeSet& s, int v);

/// True iff the directed edge list over d nodes admits a topological order.
bool is_acyclic(int d, std::span<const Edge> edges);

/// Directed acyclic graph. Every mutation keeps the graph acyclic.
class Dag {
public:
    Dag() = default;
    explicit Dag(int d);
    /// Throws std::invalid_argument on cycles, self-loops or duplicate edges.
    static Dag from_edges(int d, std::span<const Edge> edges);

    int d() const { return static_cast<int>(parents_.size()); }
    const NodeSet& parents(int v) const { return parents_[v]; }
    const NodeSet& children(int v) const { return children_[v]; }
    bool has_edge(int from, int to) const { return contains(parents_[to], from); }
    bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
    int edge_count() const;
    /// Edges sorted by (from, to).
    std::vector<Edge> edges() const;

    /// True if a directed path from -> ... -> to exists (length ≥ 0).
    bool reachable(int from, int to) const;
    /// Would adding from -> to keep the graph acyclic (and not duplicate)?
    bool can_add(int from, int to) const;
    /// Would reversing from -> to keep the graph acyclic?
    bool can_reverse(int from, int to) const;

    void add_edge(int from, int to);
    void remove_edge(int from, int to);
    void reverse_edge(int from, int to);

    std::vector<int> topological_order() const;
    NodeSet descendants(int v) const;
    NodeSet ancestors(std::span<const int> nodes) const;

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    std::vector<NodeSet> parents_;
    std::vector<NodeSet> children_;
};

/// Partially directed graph: a mix of directed and undirected edges.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(int d);
    static Pdag from_dag(const Dag& g);

    int d() const { return d_; }
    bool has_directed(int from, int to) const;
    bool has_undirected(int a, int b) const;
    bool adjacent(int a, int b) const;
    void add_directed(int from, int to);
    void add_undirected(int a, int b);
    /// Turns a–b (undirected) into from -> to.
    void orient(int from, int to);
    void remove(int a, int b);

    /// Sorted (from, to) pairs.
    std::vector<Edge> directed_edges() const;
    /// Sorted pairs with first < second.
    std::vector<Edge> undirected_edges() const;

    friend bool operator==(const Pdag&, const Pdag&) = default;

private:
    int d_ = 0;
    // edge_[a * d + b]: 0 none, 1 a->b, 2 b->a, 3 undirected. Symmetric encoding.
    std::vector<unsigned char> mark_;
    unsigned char& at(int a, int b) { return mark_[static_cast<std::size_t>(a) * d_ + b]; }
    unsigned char at(int a, int b) const { return mark_[static_cast<std::size_t>(a) * d_ + b]; }
};

/// d-separation of x and y given z (Bayes-ball reachability).
bool d_separated(const Dag& g, int x, int y, std::span<const int> z);

/// d-separation of node sets via the moralized ancestral graph.
bool d_separated(const Dag& g, std::span<const int> xs, std::span<const int> ys, std::span<const int> z);

/// Nodes reachable from x by an active trail given z (Bayes ball), excluding x and z.
NodeSet d_connected_from(const Dag& g, int x, std::span<const int> z);

struct MarkovSets {
    std::vector<NodeSet> pc;
    std::vector<NodeSet> sp;
    std::vector<NodeSet> mb;
};

MarkovSets markov_sets(const Dag& g);

void write_dot(std::ostream& out, const Dag& g, std::span<const std::string> names);
void write_dot(std::ostream& out, const Pdag& g, std::span<const std::string> names);

}  // namespace h2pc

#endif  // H2PC_GRAPH_HPP
