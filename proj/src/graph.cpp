#include <h2pc/graph.hpp>

#include <algorithm>
#include <deque>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace h2pc {

NodeSet make_set(std::vector<int> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

bool contains(const NodeSet& s, int v) { return std::binary_search(s.begin(), s.end(), v); }

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void insert(NodeSet& s, int v) {
    const auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
}

void erase(NodeSet& s, int v) {
    const auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it != s.end() && *it == v) s.erase(it);
}

bool is_acyclic(int d, std::span<const Edge> edges) {
    std::vector<int> indegree(d, 0);
    std::vector<std::vector<int>> out(d);
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= d || b >= d) throw std::out_of_range("edge endpoint out of range");
        out[a].push_back(b);
        ++indegree[b];
    }
    std::vector<int> ready;
    for (int v = 0; v < d; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    int seen = 0;
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        ++seen;
        for (int w : out[v]) {
            if (--indegree[w] == 0) ready.push_back(w);
        }
    }
    return seen == d;
}

Dag::Dag(int d) : parents_(d), children_(d) {}

Dag Dag::from_edges(int d, std::span<const Edge> edges) {
    Dag g(d);
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= d || b >= d) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
        if (g.has_edge(a, b)) throw std::invalid_argument("duplicate edge");
        insert(g.parents_[b], a);
        insert(g.children_[a], b);
    }
    if (!is_acyclic(d, edges)) throw std::invalid_argument("edge set contains a directed cycle");
    return g;
}

int Dag::edge_count() const {
    int m = 0;
    for (const auto& p : parents_) m += static_cast<int>(p.size());
    return m;
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < d(); ++a) {
        for (int b : children_[a]) out.emplace_back(a, b);
    }
    return out;
}

bool Dag::reachable(int from, int to) const {
    if (from == to) return true;
    std::vector<char> seen(d(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int c : children_[v]) {
            if (c == to) return true;
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
        }
    }
    return false;
}

bool Dag::can_add(int from, int to) const {
    return from != to && !adjacent(from, to) && !reachable(to, from);
}

bool Dag::can_reverse(int from, int to) const {
    if (!has_edge(from, to)) return false;
    // Another directed path from -> ... -> to would close a cycle with to -> from.
    std::vector<char> seen(d(), 0);
    std::vector<int> stack;
    for (int c : children_[from]) {
        if (c != to && !seen[c]) {
            seen[c] = 1;
            stack.push_back(c);
        }
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == to) return false;
        for (int c : children_[v]) {
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
        }
    }
    return true;
}

void Dag::add_edge(int from, int to) {
    if (!can_add(from, to)) {
        throw std::logic_error("adding " + std::to_string(from) + "->" + std::to_string(to) +
                               " is not allowed");
    }
    insert(parents_[to], from);
    insert(children_[from], to);
}

void Dag::remove_edge(int from, int to) {
    if (!has_edge(from, to)) throw std::logic_error("no such edge");
    erase(parents_[to], from);
    erase(children_[from], to);
}

void Dag::reverse_edge(int from, int to) {
    if (!can_reverse(from, to)) throw std::logic_error("reversal would create a cycle");
    remove_edge(from, to);
    insert(parents_[from], to);
    insert(children_[to], from);
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indegree(d());
    for (int v = 0; v < d(); ++v) indegree[v] = static_cast<int>(parents_[v].size());
    // Smallest ready index first, so the order is canonical.
    std::vector<int> ready;
    for (int v = d() - 1; v >= 0; --v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    std::vector<int> order;
    order.reserve(d());
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        const int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (int c : children_[v]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    return order;
}

NodeSet Dag::descendants(int v) const {
    std::vector<char> seen(d(), 0);
    std::vector<int> stack{v};
    NodeSet out;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int c : children_[u]) {
            if (!seen[c]) {
                seen[c] = 1;
                out.push_back(c);
                stack.push_back(c);
            }
        }
    }
    return make_set(std::move(out));
}

NodeSet Dag::ancestors(std::span<const int> nodes) const {
    std::vector<char> seen(d(), 0);
    std::vector<int> stack(nodes.begin(), nodes.end());
    for (int v : nodes) seen[v] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int p : parents_[u]) {
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
        }
    }
    NodeSet out;
    for (int v = 0; v < d(); ++v) {
        if (seen[v]) out.push_back(v);
    }
    return out;
}

Pdag::Pdag(int d) : d_(d), mark_(static_cast<std::size_t>(d) * d, 0) {}

Pdag Pdag::from_dag(const Dag& g) {
    Pdag p(g.d());
    for (const auto& [a, b] : g.edges()) p.add_directed(a, b);
    return p;
}

bool Pdag::has_directed(int from, int to) const { return at(from, to) == 1; }
bool Pdag::has_undirected(int a, int b) const { return at(a, b) == 3; }
bool Pdag::adjacent(int a, int b) const { return at(a, b) != 0; }

void Pdag::add_directed(int from, int to) {
    if (from == to) throw std::invalid_argument("self-loop");
    at(from, to) = 1;
    at(to, from) = 2;
}

void Pdag::add_undirected(int a, int b) {
    if (a == b) throw std::invalid_argument("self-loop");
    at(a, b) = 3;
    at(b, a) = 3;
}

void Pdag::orient(int from, int to) { add_directed(from, to); }

void Pdag::remove(int a, int b) {
    at(a, b) = 0;
    at(b, a) = 0;
}

std::vector<Edge> Pdag::directed_edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < d_; ++a) {
        for (int b = 0; b < d_; ++b) {
            if (at(a, b) == 1) out.emplace_back(a, b);
        }
    }
    return out;
}

std::vector<Edge> Pdag::undirected_edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < d_; ++a) {
        for (int b = a + 1; b < d_; ++b) {
            if (at(a, b) == 3) out.emplace_back(a, b);
        }
    }
    return out;
}

NodeSet d_connected_from(const Dag& g, int x, std::span<const int> z) {
    const int d = g.d();
    std::vector<char> in_z(d, 0);
    for (int v : z) in_z[v] = 1;
    std::vector<char> anc_z(d, 0);
    for (int v : g.ancestors(z)) anc_z[v] = 1;

    // State: node plus direction of arrival (0 = from a child, going up; 1 = from a parent).
    std::vector<char> visited(static_cast<std::size_t>(2 * d), 0);
    std::vector<char> reached(d, 0);
    std::vector<std::pair<int, int>> stack{{x, 0}};
    while (!stack.empty()) {
        const auto [v, dir] = stack.back();
        stack.pop_back();
        auto& seen = visited[static_cast<std::size_t>(2 * v + dir)];
        if (seen) continue;
        seen = 1;
        if (!in_z[v]) reached[v] = 1;
        if (dir == 0 && !in_z[v]) {
            for (int p : g.parents(v)) stack.emplace_back(p, 0);
            for (int c : g.children(v)) stack.emplace_back(c, 1);
        } else if (dir == 1) {
            if (!in_z[v]) {
                for (int c : g.children(v)) stack.emplace_back(c, 1);
            }
            if (anc_z[v]) {
                for (int p : g.parents(v)) stack.emplace_back(p, 0);
            }
        }
    }
    NodeSet out;
    for (int v = 0; v < d; ++v) {
        if (reached[v] && v != x) out.push_back(v);
    }
    return out;
}

bool d_separated(const Dag& g, int x, int y, std::span<const int> z) {
    return !contains(d_connected_from(g, x, z), y);
}

bool d_separated(const Dag& g, std::span<const int> xs, std::span<const int> ys, std::span<const int> z) {
    const int d = g.d();
    std::vector<int> all(xs.begin(), xs.end());
    all.insert(all.end(), ys.begin(), ys.end());
    all.insert(all.end(), z.begin(), z.end());
    std::vector<char> keep(d, 0);
    for (int v : g.ancestors(all)) keep[v] = 1;
    std::vector<char> in_z(d, 0);
    for (int v : z) in_z[v] = 1;

    // Moral graph of the ancestral set, with Z removed.
    std::vector<std::vector<int>> adj(d);
    auto link = [&](int a, int b) {
        if (in_z[a] || in_z[b]) return;
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (int v = 0; v < d; ++v) {
        if (!keep[v]) continue;
        const auto& pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            link(pa[i], v);
            for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
        }
    }
    std::vector<char> target(d, 0);
    for (int v : ys) target[v] = 1;
    std::vector<char> seen(d, 0);
    std::vector<int> stack;
    for (int v : xs) {
        if (in_z[v]) continue;
        seen[v] = 1;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (target[v]) return false;
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return true;
}

MarkovSets markov_sets(const Dag& g) {
    const int d = g.d();
    MarkovSets m;
    m.pc.resize(d);
    m.sp.resize(d);
    m.mb.resize(d);
    for (int v = 0; v < d; ++v) {
        m.pc[v] = set_union(g.parents(v), g.children(v));
        NodeSet sp;
        for (int c : g.children(v)) {
            for (int p : g.parents(c)) {
                if (p != v) sp.push_back(p);
            }
        }
        m.sp[v] = make_set(std::move(sp));
        m.mb[v] = set_union(m.pc[v], m.sp[v]);
    }
    return m;
}

namespace {

// DOT ID in double quotes; only '"' and '\\' need escaping.
std::string quoted(const std::string& name) {
    std::string s = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') s += '\\';
        s += c;
    }
    return s + '"';
}

void dot_header(std::ostream& out, std::span<const std::string> names, int d) {
    out << "digraph G {\n";
    for (int v = 0; v < d; ++v) out << "  " << quoted(names[v]) << ";\n";
}

}  // namespace

void write_dot(std::ostream& out, const Dag& g, std::span<const std::string> names) {
    dot_header(out, names, g.d());
    for (const auto& [a, b] : g.edges()) out << "  " << quoted(names[a]) << " -> " << quoted(names[b]) << ";\n";
    out << "}\n";
}

void write_dot(std::ostream& out, const Pdag& g, std::span<const std::string> names) {
    dot_header(out, names, g.d());
    for (const auto& [a, b] : g.directed_edges()) {
        out << "  " << quoted(names[a]) << " -> " << quoted(names[b]) << ";\n";
    }
    for (const auto& [a, b] : g.undirected_edges()) {
        out << "  " << quoted(names[a]) << " -> " << quoted(names[b]) << " [dir=none];\n";
    }
    out << "}\n";
}

}  // namespace h2pc
