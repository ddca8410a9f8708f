#include <h2pc/network.hpp>
#include <h2pc/random.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace h2pc {

using json = nlohmann::ordered_json;

namespace {

Eigen::Index config_count(const std::vector<Variable>& vars, const NodeSet& parents) {
    Eigen::Index q = 1;
    for (int p : parents) q *= vars[p].arity();
    return q;
}

}  // namespace

void validate_cpts(const std::vector<Variable>& variables, const Dag& graph,
                   const std::vector<Eigen::MatrixXd>& cpts, double tol) {
    if (static_cast<int>(variables.size()) != graph.d() || static_cast<int>(cpts.size()) != graph.d()) {
        throw DataError("network: variable, graph and CPT counts disagree");
    }
    for (int v = 0; v < graph.d(); ++v) {
        const auto& name = variables[v].name;
        const auto& t = cpts[v];
        const auto q = config_count(variables, graph.parents(v));
        if (t.rows() != variables[v].arity() || t.cols() != q) {
            throw DataError("node '" + name + "': CPT is " + std::to_string(t.rows()) + "x" +
                            std::to_string(t.cols()) + ", expected " + std::to_string(variables[v].arity()) +
                            "x" + std::to_string(q));
        }
        if ((t.array() < 0.0).any() || !t.allFinite()) {
            throw DataError("node '" + name + "': CPT has negative or non-finite entries");
        }
        for (Eigen::Index j = 0; j < q; ++j) {
            const double s = t.col(j).sum();
            if (std::abs(s - 1.0) > tol) {
                throw DataError("node '" + name + "': CPT column " + std::to_string(j) + " sums to " +
                                std::to_string(s));
            }
        }
    }
}

BayesianNetwork::BayesianNetwork(std::vector<Variable> variables, Dag graph, std::vector<Eigen::MatrixXd> cpts)
    : variables_(std::move(variables)), graph_(std::move(graph)), cpts_(std::move(cpts)) {
    validate_cpts(variables_, graph_, cpts_, 1e-9);
}

std::vector<std::string> BayesianNetwork::names() const {
    std::vector<std::string> out;
    for (const auto& v : variables_) out.push_back(v.name);
    return out;
}

Eigen::Index BayesianNetwork::parent_config(int v, std::span<const Level> assignment) const {
    Eigen::Index j = 0;
    for (int p : graph_.parents(v)) j = j * arity(p) + assignment[p];
    return j;
}

CategoricalDataset forward_sample(const BayesianNetwork& net, int n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("forward_sample: negative row count");
    Rng rng(seed);
    LevelMatrix cells(n, net.d());
    for (int v : net.graph().topological_order()) {
        const auto& t = net.cpt(v);
        const auto& parents = net.graph().parents(v);
        for (int i = 0; i < n; ++i) {
            Eigen::Index j = 0;
            for (int p : parents) j = j * net.arity(p) + cells(i, p);
            cells(i, v) = sample_categorical(rng, t.col(j), t.col(j).sum());
        }
    }
    return CategoricalDataset(net.variables(), std::move(cells));
}

BayesianNetwork fit_parameters(const Dag& graph, const CategoricalDataset& data, double pseudo_count) {
    if (graph.d() != data.d()) throw DataError("fit_parameters: graph and data sizes differ");
    std::vector<Eigen::MatrixXd> cpts(graph.d());
    for (int v = 0; v < graph.d(); ++v) {
        const auto& parents = graph.parents(v);
        const auto q = config_count(data.variables(), parents);
        Eigen::MatrixXd counts = Eigen::MatrixXd::Constant(data.arity(v), q, pseudo_count);
        for (int i = 0; i < data.n(); ++i) {
            Eigen::Index j = 0;
            for (int p : parents) j = j * data.arity(p) + data(i, p);
            counts(data(i, v), j) += 1.0;
        }
        for (Eigen::Index j = 0; j < q; ++j) {
            const double s = counts.col(j).sum();
            if (s > 0.0) {
                counts.col(j) /= s;
            } else {
                counts.col(j).setConstant(1.0 / data.arity(v));
            }
        }
        cpts[v] = std::move(counts);
    }
    return BayesianNetwork(data.variables(), graph, std::move(cpts));
}

BayesianNetwork read_network(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("network JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("variables") || !doc.contains("edges") || !doc.contains("cpts")) {
        throw DataError("network JSON must have 'variables', 'edges' and 'cpts'");
    }
    std::vector<Variable> vars;
    std::map<std::string, int> index;
    for (const auto& jv : doc["variables"]) {
        Variable v;
        try {
            v.name = jv.at("name").get<std::string>();
            v.levels = jv.at("levels").get<std::vector<std::string>>();
        } catch (const json::exception&) {
            throw DataError("network JSON: variable " + std::to_string(vars.size()) +
                            " needs 'name' and 'levels'");
        }
        if (v.levels.empty()) throw DataError("node '" + v.name + "': no levels");
        if (!index.emplace(v.name, static_cast<int>(vars.size())).second) {
            throw DataError("node '" + v.name + "': declared twice");
        }
        vars.push_back(std::move(v));
    }
    const int d = static_cast<int>(vars.size());

    // Parent order as listed in the file, per child.
    std::vector<std::vector<int>> listed(d);
    std::vector<Edge> edges;
    for (const auto& je : doc["edges"]) {
        if (!je.is_array() || je.size() != 2) throw DataError("network JSON: edges must be [parent, child] pairs");
        const auto pn = je[0].get<std::string>();
        const auto cn = je[1].get<std::string>();
        const auto pi = index.find(pn);
        const auto ci = index.find(cn);
        if (pi == index.end()) throw DataError("edge references unknown node '" + pn + "'");
        if (ci == index.end()) throw DataError("edge references unknown node '" + cn + "'");
        edges.emplace_back(pi->second, ci->second);
        listed[ci->second].push_back(pi->second);
    }
    Dag graph;
    try {
        graph = Dag::from_edges(d, edges);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("network graph: ") + e.what());
    }

    std::vector<Eigen::MatrixXd> cpts(d);
    const auto& jc = doc["cpts"];
    for (int v = 0; v < d; ++v) {
        const auto& name = vars[v].name;
        if (!jc.contains(name)) throw DataError("node '" + name + "': missing CPT");
        std::vector<double> flat;
        try {
            flat = jc[name].get<std::vector<double>>();
        } catch (const json::exception&) {
            throw DataError("node '" + name + "': CPT must be an array of numbers");
        }
        const auto& order = listed[v];
        const int r = vars[v].arity();
        Eigen::Index q = 1;
        for (int p : order) q *= vars[p].arity();
        if (static_cast<Eigen::Index>(flat.size()) != q * r) {
            throw DataError("node '" + name + "': CPT has " + std::to_string(flat.size()) + " entries, expected " +
                            std::to_string(q * r));
        }
        // Re-index configurations from listed parent order to ascending index order.
        const auto& sorted = graph.parents(v);
        Eigen::MatrixXd t(r, q);
        std::vector<int> level(d, 0);
        for (Eigen::Index listed_j = 0; listed_j < q; ++listed_j) {
            Eigen::Index rem = listed_j;
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                level[*it] = static_cast<int>(rem % vars[*it].arity());
                rem /= vars[*it].arity();
            }
            Eigen::Index j = 0;
            for (int p : sorted) j = j * vars[p].arity() + level[p];
            for (int k = 0; k < r; ++k) t(k, j) = flat[static_cast<std::size_t>(listed_j * r + k)];
        }
        cpts[v] = std::move(t);
    }
    validate_cpts(vars, graph, cpts, 1e-6);
    for (auto& t : cpts) {
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            const double s = t.col(j).sum();
            if (std::abs(s - 1.0) > 1e-9) t.col(j) /= s;
        }
    }
    return BayesianNetwork(std::move(vars), std::move(graph), std::move(cpts));
}

BayesianNetwork read_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_network(in);
}

void write_network(std::ostream& out, const BayesianNetwork& net) {
    json doc;
    doc["variables"] = json::array();
    for (const auto& v : net.variables()) doc["variables"].push_back({{"name", v.name}, {"levels", v.levels}});
    doc["edges"] = json::array();
    for (const auto& [a, b] : net.graph().edges()) {
        doc["edges"].push_back({net.variable(a).name, net.variable(b).name});
    }
    doc["cpts"] = json::object();
    for (int v = 0; v < net.d(); ++v) {
        const auto& t = net.cpt(v);
        doc["cpts"][net.variable(v).name] = std::vector<double>(t.data(), t.data() + t.size());
    }
    out << doc.dump(2) << '\n';
}

void write_network(const std::filesystem::path& path, const BayesianNetwork& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_network(out, net);
}

}  // namespace h2pc
