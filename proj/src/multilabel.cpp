#include <h2pc/multilabel.hpp>
#include <h2pc/parallel.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace h2pc {

std::vector<NodeSet> minimal_label_powersets(const Dag& g, const NodeSet& labels) {
    // Union-find over positions in `labels`.
    const int m = static_cast<int>(labels.size());
    std::vector<int> root(m);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int i) {
        while (root[i] != i) i = root[i] = root[root[i]];
        return i;
    };
    auto join = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
    };
    auto pos = [&](int v) {
        const auto it = std::lower_bound(labels.begin(), labels.end(), v);
        return it != labels.end() && *it == v ? static_cast<int>(it - labels.begin()) : -1;
    };
    for (int i = 0; i < m; ++i) {
        const int y = labels[i];
        for (int p : g.parents(y)) {
            if (const int j = pos(p); j >= 0) join(i, j);
        }
        for (int c : g.children(y)) {
            if (pos(c) >= 0) continue;
            for (int p : g.parents(c)) {
                if (const int j = pos(p); j >= 0) join(i, j);
            }
        }
    }
    std::vector<NodeSet> blocks;
    std::vector<int> block_of(m, -1);
    for (int i = 0; i < m; ++i) {
        const int r = find(i);
        if (block_of[r] < 0) {
            block_of[r] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        blocks[block_of[r]].push_back(labels[i]);
    }
    return blocks;
}

NodeSet powerset_markov_boundary(const Dag& g, const NodeSet& block, const NodeSet& labels) {
    NodeSet m;
    for (int y : block) {
        m = set_union(m, g.parents(y));
        for (int c : g.children(y)) {
            insert(m, c);
            m = set_union(m, g.parents(c));
        }
    }
    return set_difference(m, labels);
}

Eigen::VectorXd PowersetClassifier::class_scores(const CategoricalDataset& data, int row) const {
    Eigen::VectorXd s = log_prior;
    for (std::size_t f = 0; f < features.size(); ++f) s += log_likelihood[f].row(data(row, features[f])).transpose();
    return s;
}

int PowersetClassifier::predict(const CategoricalDataset& data, int row) const {
    const Eigen::VectorXd s = class_scores(data, row);
    int best = 0;
    for (int c = 1; c < s.size(); ++c) {
        if (s(c) > s(best)) best = c;
    }
    return best;
}

PowersetClassifier fit_powerset_classifier(const CategoricalDataset& train, const NodeSet& block,
                                           const NodeSet& features, double smoothing) {
    if (block.empty()) throw std::invalid_argument("fit_powerset_classifier: empty block");
    if (!set_intersection(block, features).empty()) {
        throw std::invalid_argument("fit_powerset_classifier: features overlap the block");
    }
    if (train.n() == 0) throw DataError("fit_powerset_classifier: no training rows");
    if (smoothing < 0) throw std::invalid_argument("smoothing must be >= 0");

    PowersetClassifier clf;
    clf.block = block;
    clf.features = features;

    std::vector<std::vector<Level>> combo(train.n(), std::vector<Level>(block.size()));
    for (int i = 0; i < train.n(); ++i) {
        for (std::size_t j = 0; j < block.size(); ++j) combo[i][j] = train(i, block[j]);
    }
    clf.classes = combo;
    std::sort(clf.classes.begin(), clf.classes.end());
    clf.classes.erase(std::unique(clf.classes.begin(), clf.classes.end()), clf.classes.end());
    const int k = clf.class_count();

    std::vector<int> cls(train.n());
    Eigen::VectorXd n_c = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < train.n(); ++i) {
        cls[i] = static_cast<int>(std::lower_bound(clf.classes.begin(), clf.classes.end(), combo[i]) -
                                  clf.classes.begin());
        n_c(cls[i]) += 1.0;
    }
    const double n = train.n();
    clf.log_prior = ((n_c.array() + smoothing) / (n + smoothing * k)).log().matrix();

    for (int f : features) {
        const int r = train.arity(f);
        Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(r, k);
        for (int i = 0; i < train.n(); ++i) counts(train(i, f), cls[i]) += 1.0;
        const Eigen::RowVectorXd denom = (n_c.array() + smoothing * r).matrix().transpose();
        Eigen::MatrixXd ll = (counts.array() + smoothing).rowwise() / denom.array();
        clf.log_likelihood.emplace_back(ll.array().log().matrix());
    }
    return clf;
}

std::vector<Level> predict_mpe(const std::vector<PowersetClassifier>& classifiers, const NodeSet& labels,
                               const CategoricalDataset& data, int row) {
    std::vector<Level> out(labels.size(), -1);
    for (const auto& clf : classifiers) {
        const auto& combo = clf.classes[static_cast<std::size_t>(clf.predict(data, row))];
        for (std::size_t j = 0; j < clf.block.size(); ++j) {
            const auto it = std::lower_bound(labels.begin(), labels.end(), clf.block[j]);
            if (it == labels.end() || *it != clf.block[j]) throw std::invalid_argument("predict_mpe: block outside labels");
            const auto slot = static_cast<std::size_t>(it - labels.begin());
            if (out[slot] >= 0) throw std::invalid_argument("predict_mpe: blocks overlap");
            out[slot] = combo[j];
        }
    }
    if (std::find(out.begin(), out.end(), -1) != out.end()) {
        throw std::invalid_argument("predict_mpe: blocks do not cover the labels");
    }
    return out;
}

Eigen::MatrixXi predict_mpe(const std::vector<PowersetClassifier>& classifiers, const NodeSet& labels,
                            const CategoricalDataset& data) {
    Eigen::MatrixXi out(data.n(), static_cast<Eigen::Index>(labels.size()));
    for (int i = 0; i < data.n(); ++i) {
        const auto row = predict_mpe(classifiers, labels, data, i);
        for (std::size_t j = 0; j < row.size(); ++j) out(i, static_cast<Eigen::Index>(j)) = row[j];
    }
    return out;
}

Eigen::MatrixXi label_matrix(const CategoricalDataset& data, const NodeSet& labels) {
    Eigen::MatrixXi out(data.n(), static_cast<Eigen::Index>(labels.size()));
    for (std::size_t j = 0; j < labels.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = data.column(labels[j]);
    return out;
}

double global_accuracy(const Eigen::MatrixXi& pred, const Eigen::MatrixXi& truth) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
        throw std::invalid_argument("global_accuracy: shape mismatch");
    }
    if (pred.rows() == 0) throw std::invalid_argument("global_accuracy: no rows");
    const auto exact = (pred.array() == truth.array()).rowwise().all().count();
    return static_cast<double>(exact) / static_cast<double>(pred.rows());
}

Scenario parse_scenario(const std::string& name) {
    if (name == "br") return Scenario::br;
    if (name == "br+mb") return Scenario::br_mb;
    if (name == "mlp") return Scenario::mlp;
    if (name == "mlp+mb") return Scenario::mlp_mb;
    throw std::invalid_argument("unknown scenario '" + name + "' (expected br, br+mb, mlp or mlp+mb)");
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::br:
            return "br";
        case Scenario::br_mb:
            return "br+mb";
        case Scenario::mlp:
            return "mlp";
        case Scenario::mlp_mb:
            return "mlp+mb";
    }
    return "?";
}

NodeSet MlcProblem::features() const {
    NodeSet all(data.d());
    std::iota(all.begin(), all.end(), 0);
    return set_difference(all, labels);
}

CategoricalDataset discretize_fold(const MlcProblem& problem, std::span<const int> train_rows,
                                   std::span<const int> rows) {
    CategoricalDataset sub = problem.data.select_rows(rows);
    if (problem.numeric.empty()) return sub;
    LevelMatrix cells = sub.cells();
    for (const auto& [col, values] : problem.numeric) {
        if (problem.data.arity(col) != 2) throw DataError("numeric column '" + problem.data.name(col) + "' needs two levels");
        std::vector<double> fit(train_rows.size());
        for (std::size_t i = 0; i < train_rows.size(); ++i) fit[i] = values[static_cast<std::size_t>(train_rows[i])];
        const double threshold = median(fit);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            cells(static_cast<Eigen::Index>(i), col) = values[static_cast<std::size_t>(rows[i])] > threshold ? 1 : 0;
        }
    }
    return CategoricalDataset(sub.variables(), std::move(cells));
}

Dag learn_local_dag(const CategoricalDataset& train, const NodeSet& labels, const LearnConfig& cfg) {
    cfg.validate();
    const int d = train.d();
    NodeSet all(d);
    std::iota(all.begin(), all.end(), 0);
    const StatisticalSource src(train, cfg.test);
    SkeletonConfig sk = cfg.skeleton;
    sk.jobs = cfg.jobs;

    const auto pc_labels = hpc_many(labels, src, all, sk);
    NodeSet ring1;
    for (const auto& pc : pc_labels) ring1 = set_union(ring1, pc);
    ring1 = set_difference(ring1, labels);
    const auto pc_ring1 = hpc_many(ring1, src, all, sk);

    const NodeSet targets = set_union(labels, ring1);
    std::map<int, const NodeSet*> pc_of;
    for (std::size_t i = 0; i < labels.size(); ++i) pc_of[labels[i]] = &pc_labels[i];
    for (std::size_t i = 0; i < ring1.size(); ++i) pc_of[ring1[i]] = &pc_ring1[i];

    NodeSet scope = targets;
    for (const auto& pc : pc_ring1) scope = set_union(scope, pc);

    // Local skeleton over positions in `scope`.
    auto local_index = [&](int v) { return static_cast<int>(std::lower_bound(scope.begin(), scope.end(), v) - scope.begin()); };
    Skeleton skel(static_cast<int>(scope.size()));
    for (int t : targets) {
        for (int v : *pc_of.at(t)) {
            const bool both = contains(targets, v);
            if (both && (v < t || !contains(*pc_of.at(v), t))) continue;
            skel.add_edge(local_index(t), local_index(v));
        }
    }

    ScoreConfig sc = cfg.score;
    sc.jobs = cfg.jobs;
    const auto sub = train.select_columns(scope);
    const auto search = hill_climb(sub, skel, sc);
    Dag g(d);
    for (const auto& [a, b] : search.dag.edges()) g.add_edge(scope[a], scope[b]);
    return g;
}

namespace {

std::string combo_token(const CategoricalDataset& data, const NodeSet& block, int row) {
    std::string s;
    for (std::size_t j = 0; j < block.size(); ++j) {
        if (j) s += '|';
        s += data.variable(block[j]).levels[data(row, block[j])];
    }
    return s;
}

void write_block_csv(const std::filesystem::path& path, const CategoricalDataset& data, const NodeSet& block,
                     const NodeSet& features) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (int f : features) out << data.name(f) << ',';
    out << "class\n";
    for (int i = 0; i < data.n(); ++i) {
        for (int f : features) out << data.variable(f).levels[data(i, f)] << ',';
        out << combo_token(data, block, i) << '\n';
    }
}

std::array<double, 3> min_med_max(std::vector<double> v) {
    if (v.empty()) return {0, 0, 0};
    std::sort(v.begin(), v.end());
    return {v.front(), median(v), v.back()};
}

}  // namespace

MlcReport run_scenario(const MlcProblem& problem, Scenario scenario, const MlcConfig& cfg,
                       const std::optional<std::filesystem::path>& export_dir) {
    if (problem.labels.empty()) throw std::invalid_argument("run_scenario: no labels");
    const NodeSet features = problem.features();
    const auto folds = kfold(problem.data.n(), cfg.folds, cfg.seed);
    const bool needs_graph = scenario != Scenario::br;

    MlcReport report;
    report.scenario = scenario;
    report.folds.resize(static_cast<std::size_t>(cfg.folds));

    const int outer = std::min(cfg.jobs, cfg.folds);
    LearnConfig learn = cfg.learn;
    learn.jobs = std::max(1, cfg.jobs / std::max(outer, 1));

    parallel_for(cfg.folds, outer, [&](int k) {
        const auto start = std::chrono::steady_clock::now();
        FoldReport& fr = report.folds[static_cast<std::size_t>(k)];
        fr.fold = k;
        const auto train_rows = folds.train_rows(k);
        const auto test_rows = folds.test_rows(k);
        const auto train = discretize_fold(problem, train_rows, train_rows);
        const auto test = discretize_fold(problem, train_rows, test_rows);
        fr.train_rows = train.n();
        fr.test_rows = test.n();

        const Dag g = needs_graph ? learn_local_dag(train, problem.labels, learn) : Dag(train.d());
        if (scenario == Scenario::mlp || scenario == Scenario::mlp_mb) {
            fr.blocks = minimal_label_powersets(g, problem.labels);
        } else {
            for (int y : problem.labels) fr.blocks.push_back({y});
        }
        std::vector<PowersetClassifier> classifiers;
        for (const auto& block : fr.blocks) {
            const bool mb = scenario == Scenario::br_mb || scenario == Scenario::mlp_mb;
            fr.features.push_back(mb ? powerset_markov_boundary(g, block, problem.labels) : features);
            classifiers.push_back(fit_powerset_classifier(train, block, fr.features.back(), cfg.smoothing));
            fr.classes.push_back(classifiers.back().class_count());
        }
        fr.accuracy = global_accuracy(predict_mpe(classifiers, problem.labels, test), label_matrix(test, problem.labels));

        if (export_dir) {
            const auto dir = *export_dir / ("fold" + std::to_string(k));
            std::filesystem::create_directories(dir);
            for (std::size_t j = 0; j < fr.blocks.size(); ++j) {
                const auto stem = "block" + std::to_string(j);
                write_block_csv(dir / (stem + "_train.csv"), train, fr.blocks[j], fr.features[j]);
                write_block_csv(dir / (stem + "_test.csv"), test, fr.blocks[j], fr.features[j]);
            }
        }
        fr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<double> acc;
    std::vector<double> sizes;
    std::vector<double> classes;
    double blocks = 0.0;
    for (const auto& fr : report.folds) {
        acc.push_back(fr.accuracy);
        blocks += static_cast<double>(fr.blocks.size());
        for (const auto& b : fr.blocks) sizes.push_back(static_cast<double>(b.size()));
        for (int c : fr.classes) classes.push_back(c);
    }
    const double k = cfg.folds;
    report.mean_accuracy = std::accumulate(acc.begin(), acc.end(), 0.0) / k;
    double ss = 0.0;
    for (double a : acc) ss += (a - report.mean_accuracy) * (a - report.mean_accuracy);
    report.sd_accuracy = k > 1 ? std::sqrt(ss / (k - 1)) : 0.0;
    report.mean_blocks = blocks / k;
    report.labels_per_block = min_med_max(sizes);
    report.classes_per_block = min_med_max(classes);
    return report;
}

}  // namespace h2pc
