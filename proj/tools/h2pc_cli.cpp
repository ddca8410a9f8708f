// h2pc: sample, learn, evaluate and benchmark discrete Bayesian networks, and
// run label-powerset multi-label experiments.

#include <h2pc/eval.hpp>
#include <h2pc/learn.hpp>
#include <h2pc/multilabel.hpp>
#include <h2pc/network.hpp>
#include <h2pc/parallel.hpp>
#include <h2pc/random.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace h2pc;

/// Bad flag values; reported like parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_jobs() {
    if (const char* env = std::getenv("H2PC_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j >= 1) return j;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring H2PC_JOBS='" << env << "'\n";
    }
    return 1;
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("invalid size '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError("empty size list");
    return out;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

/// Options shared by every command that learns structure.
struct LearnFlags {
    double alpha = 0.05;
    double power_threshold = 5.0;
    std::string power_cells = "nominal";
    int max_condset = -1;
    std::string score = "bdeu";
    double ess = 10.0;
    int tabu = 100;
    int patience = 15;

    void attach(CLI::App* app) {
        app->add_option("--alpha", alpha, "Significance level of tests and FDR control")->capture_default_str();
        app->add_option("--power-threshold", power_threshold, "Minimum average rows per cell")->capture_default_str();
        app->add_option("--power-cells", power_cells, "Cell count for the power rule")
            ->check(CLI::IsMember({"nominal", "observed"}))
            ->capture_default_str();
        app->add_option("--max-condset", max_condset, "Cap on |Z| in FDR-IAPC (-1: none)")->capture_default_str();
        app->add_option("--score", score, "Search score")->check(CLI::IsMember({"bdeu", "bic"}))->capture_default_str();
        app->add_option("--ess", ess, "BDeu equivalent sample size")->capture_default_str();
        app->add_option("--tabu", tabu, "TABU list length")->capture_default_str();
        app->add_option("--patience", patience, "Moves without improvement before stopping")->capture_default_str();
    }

    LearnConfig resolve(int jobs) const {
        LearnConfig cfg;
        cfg.test.alpha = alpha;
        cfg.test.power_threshold = power_threshold;
        cfg.test.power_cells = power_cells == "observed" ? PowerRuleCells::observed : PowerRuleCells::nominal;
        cfg.skeleton.alpha = alpha;
        if (max_condset >= 0) cfg.skeleton.max_condset = max_condset;
        cfg.score.score = parse_score_type(score);
        cfg.score.ess = ess;
        cfg.score.tabu_length = tabu;
        cfg.score.patience = patience;
        cfg.jobs = jobs;
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }

    json to_json() const {
        return {{"alpha", alpha},
                {"power_threshold", power_threshold},
                {"power_cells", power_cells},
                {"max_condset", max_condset >= 0 ? json(max_condset) : json(nullptr)},
                {"score", score},
                {"ess", ess},
                {"tabu", tabu},
                {"patience", patience}};
    }
};

json metrics_json(const SkeletonMetrics& m) {
    return {{"tp", m.tp},         {"fp", m.fp},   {"fn", m.fn},
            {"precision", m.precision}, {"recall", m.recall}, {"fpr", m.fpr}, {"euclidean", m.euclidean}};
}

json stats_json(const HpcStats& s) {
    auto one = [](const QueryStats& q) { return json{{"calls", q.calls}, {"max_condset", q.max_condset}}; };
    return {{"de_pcs", one(s.pcs)}, {"de_sps", one(s.sps)}, {"fdr_iapc", one(s.iapc)}};
}

json edges_json(const Dag& g, const std::vector<std::string>& names) {
    json out = json::array();
    for (const auto& [a, b] : g.edges()) out.push_back({names[a], names[b]});
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> names_of(const CategoricalDataset& data) {
    std::vector<std::string> out;
    for (const auto& v : data.variables()) out.push_back(v.name);
    return out;
}

/// Reorders `net`'s structure onto the variable order of `names`.
Dag align_structure(const BayesianNetwork& net, const std::vector<std::string>& names, const std::string& what) {
    const auto own = net.names();
    if (std::set<std::string>(own.begin(), own.end()) != std::set<std::string>(names.begin(), names.end()) ||
        own.size() != names.size()) {
        throw DataError(what + " does not have the same variables as the reference");
    }
    std::vector<int> to(own.size());
    for (std::size_t i = 0; i < own.size(); ++i) {
        to[i] = static_cast<int>(std::find(names.begin(), names.end(), own[i]) - names.begin());
    }
    std::vector<Edge> edges;
    for (const auto& [a, b] : net.graph().edges()) edges.emplace_back(to[a], to[b]);
    return Dag::from_edges(static_cast<int>(names.size()), edges);
}

CategoricalDataset load_with_schema(const std::string& path, const std::vector<Variable>& schema) {
    return from_table(read_table(std::filesystem::path(path)), schema);
}

// ---------------------------------------------------------------- sample

struct SampleCmd {
    std::string net;
    int n = 0;
    std::string sizes;
    std::uint64_t seed = 0;
    std::string out;
    std::string out_dir;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("sample", "Forward-sample a network to CSV");
        app->add_option("--net", net, "Network JSON")->required();
        auto* n_opt = app->add_option("--n", n, "Number of rows");
        auto* s_opt = app->add_option("--sizes", sizes, "Comma-separated sizes, one file each");
        n_opt->excludes(s_opt);
        app->add_option("--seed", seed, "Random seed")->required();
        app->add_option("--out", out, "Output CSV (with --n)");
        app->add_option("--out-dir", out_dir, "Output directory (with --sizes)");
        app->callback([this] { run(); });
    }

    void run() const {
        const auto network = read_network(std::filesystem::path(net));
        if (!sizes.empty()) {
            if (out_dir.empty()) throw UsageError("--sizes requires --out-dir");
            std::filesystem::create_directories(out_dir);
            for (int size : parse_sizes(sizes)) {
                const auto path = std::filesystem::path(out_dir) / ("sample_" + std::to_string(size) + ".csv");
                write_csv(path, forward_sample(network, size, seed));
                std::cout << path.string() << '\n';
            }
            return;
        }
        if (n < 1) throw UsageError("--n must be >= 1 (or use --sizes)");
        if (out.empty()) throw UsageError("--out is required with --n");
        write_csv(std::filesystem::path(out), forward_sample(network, n, seed));
    }
};

// ---------------------------------------------------------------- learn

struct LearnCmd {
    std::string data;
    std::string out;
    std::string report;
    std::string skeleton_in;
    bool skeleton_only = false;
    double laplace = 0.0;
    std::string command;
    LearnFlags flags;
    int* jobs = nullptr;
    bool* timings = nullptr;

    /// `learn`, or with skeleton_cmd set, `learn-skeleton` (phase 1 only).
    void attach(CLI::App& root, int& jobs_ref, bool& timings_ref, bool skeleton_cmd = false) {
        jobs = &jobs_ref;
        timings = &timings_ref;
        skeleton_only = skeleton_cmd;
        command = skeleton_cmd ? "learn-skeleton" : "learn";
        auto* app = skeleton_cmd ? root.add_subcommand("learn-skeleton", "Learn the HPC skeleton only")
                                 : root.add_subcommand("learn", "Learn a network structure with H2PC");
        app->add_option("--data", data, "Training CSV")->required();
        app->add_option("--report", report, "Report JSON");
        if (skeleton_cmd) {
            app->add_option("--out", out, "Output skeleton JSON")->required();
        } else {
            app->add_option("--out", out, "Output network JSON (skeleton JSON with --skeleton-only)")->required();
            auto* only = app->add_flag("--skeleton-only", skeleton_only, "Stop after the skeleton phase");
            app->add_option("--skeleton", skeleton_in, "Use this skeleton JSON instead of learning one")->excludes(only);
            app->add_option("--laplace", laplace, "Pseudo-count for the fitted CPTs (0: maximum likelihood)")
                ->capture_default_str();
        }
        flags.attach(app);
        app->callback([this] { run(); });
    }

    void run() const {
        if (laplace < 0) throw UsageError("--laplace must be >= 0");
        const auto cfg = flags.resolve(*jobs);
        const auto t0 = std::chrono::steady_clock::now();
        const auto ds = load_csv(data);
        const auto names = names_of(ds);

        json doc;
        doc["command"] = command;
        doc["config"] = flags.to_json();
        doc["config"]["data"] = data;
        doc["config"]["skeleton"] = skeleton_in.empty() ? json(nullptr) : json(skeleton_in);
        doc["config"]["skeleton_only"] = skeleton_only;
        doc["config"]["laplace"] = laplace;
        doc["data"] = {{"rows", ds.n()}, {"variables", ds.d()}};

        Skeleton skel;
        if (skeleton_in.empty()) {
            HpcStats stats;
            std::size_t tests = 0;
            skel = learn_skeleton(ds, cfg, &stats, &tests);
            doc["skeleton"] = {{"edges", skel.edge_count()}, {"tests", tests}, {"queries", stats_json(stats)}};
        } else {
            skel = read_skeleton(skeleton_in, names);
            doc["skeleton"] = {{"edges", skel.edge_count()}};
        }
        if (skeleton_only) {
            write_skeleton(std::filesystem::path(out), skel, names);
        } else {
            ScoreConfig sc = cfg.score;
            sc.jobs = cfg.jobs;
            const auto search = hill_climb(ds, skel, sc);
            write_network(std::filesystem::path(out), fit_parameters(search.dag, ds, laplace));
            doc["search"] = {{"initial_score", search.initial_score},
                             {"score", search.score},
                             {"moves", search.moves},
                             {"improvements", search.improvements},
                             {"edges", edges_json(search.dag, names)}};
            std::cout << "edges " << search.dag.edge_count() << "  " << flags.score << ' ' << search.score << '\n';
        }
        if (*timings) doc["seconds"] = seconds_since(t0);
        if (!report.empty()) write_json(report, doc);
    }
};

// ---------------------------------------------------------------- evaluate

struct EvaluateCmd {
    std::string learned;
    std::string truth;
    std::string train;
    std::string test;
    std::string report;
    double ess = 10.0;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("evaluate", "Compare a learned network against the truth and score it");
        app->add_option("--learned", learned, "Learned network JSON")->required();
        app->add_option("--truth", truth, "True network JSON");
        app->add_option("--train", train, "Training CSV to score on");
        app->add_option("--test", test, "Held-out CSV to score on");
        app->add_option("--report", report, "Report JSON");
        app->add_option("--ess", ess, "BDeu equivalent sample size")->capture_default_str();
        app->callback([this] { run(); });
    }

    void run() const {
        if (!(ess > 0)) throw UsageError("--ess must be positive");
        const auto lnet = read_network(std::filesystem::path(learned));
        json doc;
        doc["command"] = "evaluate";
        doc["config"] = {{"learned", learned}, {"truth", truth}, {"train", train}, {"test", test}, {"ess", ess}};

        // The truth (when given) fixes variable order and level sets.
        const BayesianNetwork ref = truth.empty() ? lnet : read_network(std::filesystem::path(truth));
        const auto names = ref.names();
        const Dag g = align_structure(lnet, names, "learned network");
        doc["edges"] = g.edge_count();

        if (!truth.empty()) {
            const auto m = skeleton_metrics(Skeleton::from_dag(g), Skeleton::from_dag(ref.graph()));
            const int dist = shd(dag_to_cpdag(g), dag_to_cpdag(ref.graph()));
            doc["skeleton"] = metrics_json(m);
            doc["shd"] = dist;
            std::printf("precision %.4f  recall %.4f  euclidean %.4f  fpr %.4f  shd %d\n", m.precision, m.recall,
                        m.euclidean, m.fpr, dist);
        }
        ScoreConfig bdeu;
        bdeu.ess = ess;
        ScoreConfig bic;
        bic.score = ScoreType::bic;
        auto scores = [&](const std::string& path) {
            const auto ds = load_with_schema(path, ref.variables());
            json s = {{"rows", ds.n()},
                      {"bdeu", total_score(ds, g, bdeu)},
                      {"bic", total_score(ds, g, bic)},
                      {"bdeu_empty", total_score(ds, Dag(ds.d()), bdeu)}};
            if (!truth.empty()) s["bdeu_truth"] = total_score(ds, ref.graph(), bdeu);
            return s;
        };
        if (!train.empty()) doc["train"] = scores(train);
        if (!test.empty()) doc["test"] = scores(test);
        if (!report.empty()) write_json(report, doc);
    }
};

// ---------------------------------------------------------------- benchmark

struct BenchmarkCmd {
    std::string truth;
    std::string sizes = "500,2000,20000";
    int repeats = 10;
    std::uint64_t seed = 0;
    int test_size = 50000;
    std::string out;
    std::string format;
    LearnFlags flags;
    int* jobs = nullptr;
    bool* timings = nullptr;

    void attach(CLI::App& root, int& jobs_ref, bool& timings_ref) {
        jobs = &jobs_ref;
        timings = &timings_ref;
        auto* app = root.add_subcommand("benchmark", "Learn from fresh samples of a network and tabulate metrics");
        app->add_option("--truth", truth, "True network JSON")->required();
        app->add_option("--sizes", sizes, "Comma-separated sample sizes")->capture_default_str();
        app->add_option("--repeats", repeats, "Repetitions per size")->capture_default_str();
        app->add_option("--seed", seed, "Random seed")->required();
        app->add_option("--test-size", test_size, "Rows in the held-out sample")->capture_default_str();
        app->add_option("--out", out, "Output table (.csv or .json)")->required();
        app->add_option("--format", format, "csv or json (default: from the extension)")
            ->check(CLI::IsMember({"csv", "json"}));
        flags.attach(app);
        app->callback([this] { run(); });
    }

    struct Row {
        int size = 0;
        int repeat = 0;
        std::uint64_t seed = 0;
        SkeletonMetrics m;
        int shd = 0;
        int edges = 0;
        HoldoutScores scores;
        double bdeu_test_empty = 0.0;
        double bdeu_test_truth = 0.0;
        std::size_t tests = 0;
        double seconds = 0.0;
    };

    void run() const {
        if (repeats < 1) throw UsageError("--repeats must be >= 1");
        if (test_size < 1) throw UsageError("--test-size must be >= 1");
        const auto size_list = parse_sizes(sizes);
        const auto cfg = flags.resolve(*jobs);
        const auto net = read_network(std::filesystem::path(truth));
        const std::string fmt = !format.empty() ? format : (out.ends_with(".json") ? "json" : "csv");

        Rng rng(seed);
        const auto test_seed = rng();
        std::vector<Row> rows;
        for (int size : size_list) {
            for (int r = 0; r < repeats; ++r) rows.push_back({size, r, rng()});
        }
        const auto test = forward_sample(net, test_size, test_seed);
        const Skeleton true_skel = Skeleton::from_dag(net.graph());
        const Pdag true_cpdag = dag_to_cpdag(net.graph());
        ScoreConfig bdeu = cfg.score;
        bdeu.score = ScoreType::bdeu;
        const double empty_test = total_score(test, Dag(net.d()), bdeu);
        const double truth_test = total_score(test, net.graph(), bdeu);

        const int outer = std::min<int>(*jobs, static_cast<int>(rows.size()));
        LearnConfig inner = cfg;
        inner.jobs = std::max(1, *jobs / outer);
        parallel_for(static_cast<int>(rows.size()), outer, [&](int i) {
            Row& row = rows[static_cast<std::size_t>(i)];
            const auto t0 = std::chrono::steady_clock::now();
            const auto train = forward_sample(net, row.size, row.seed);
            const auto res = learn_structure(train, inner);
            row.m = skeleton_metrics(res.skeleton, true_skel);
            row.shd = shd(dag_to_cpdag(res.search.dag), true_cpdag);
            row.edges = res.search.dag.edge_count();
            row.scores = holdout_scores(res.search.dag, train, test, cfg.score.ess);
            row.bdeu_test_empty = empty_test;
            row.bdeu_test_truth = truth_test;
            row.tests = res.tests_run;
            row.seconds = seconds_since(t0);
        });

        if (fmt == "json") {
            json doc;
            doc["command"] = "benchmark";
            doc["config"] = flags.to_json();
            doc["config"].update({{"truth", truth}, {"sizes", size_list}, {"repeats", repeats}, {"seed", seed},
                                  {"test_size", test_size}});
            doc["rows"] = json::array();
            for (const auto& r : rows) {
                json j = {{"size", r.size},
                          {"repeat", r.repeat},
                          {"seed", r.seed},
                          {"skeleton", metrics_json(r.m)},
                          {"shd", r.shd},
                          {"edges", r.edges},
                          {"bdeu_train", r.scores.bdeu_train},
                          {"bic_train", r.scores.bic_train},
                          {"bdeu_test", r.scores.bdeu_test},
                          {"bic_test", r.scores.bic_test},
                          {"bdeu_test_empty", r.bdeu_test_empty},
                          {"bdeu_test_truth", r.bdeu_test_truth},
                          {"tests", r.tests}};
                if (*timings) j["seconds"] = r.seconds;
                doc["rows"].push_back(j);
            }
            write_json(out, doc);
        } else {
            std::ofstream f(out, std::ios::binary);
            if (!f) throw DataError("cannot write " + out);
            f << "size,repeat,seed,tp,fp,fn,precision,recall,fpr,euclidean,shd,edges,bdeu_train,bic_train,"
                 "bdeu_test,bic_test,bdeu_test_empty,bdeu_test_truth,tests"
              << (*timings ? ",seconds" : "") << '\n';
            char buf[512];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof buf,
                              "%d,%d,%llu,%d,%d,%d,%.10g,%.10g,%.10g,%.10g,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%zu",
                              r.size, r.repeat, static_cast<unsigned long long>(r.seed), r.m.tp, r.m.fp, r.m.fn,
                              r.m.precision, r.m.recall, r.m.fpr, r.m.euclidean, r.shd, r.edges, r.scores.bdeu_train,
                              r.scores.bic_train, r.scores.bdeu_test, r.scores.bic_test, r.bdeu_test_empty,
                              r.bdeu_test_truth, r.tests);
                f << buf;
                if (*timings) f << ',' << r.seconds;
                f << '\n';
            }
        }
        std::printf("%zu runs written to %s\n", rows.size(), out.c_str());
    }
};

// ---------------------------------------------------------------- mlc

struct MlcCmd {
    std::string data;
    std::string labels;
    int label_count = 0;
    std::string scenario = "mlp+mb";
    int folds = 10;
    std::uint64_t seed = 0;
    std::string report;
    std::string export_dir;
    bool binarize = false;
    double smoothing = 1.0;
    LearnFlags flags;
    int* jobs = nullptr;
    bool* timings = nullptr;

    void attach(CLI::App& root, int& jobs_ref, bool& timings_ref) {
        jobs = &jobs_ref;
        timings = &timings_ref;
        auto* app = root.add_subcommand("mlc", "Cross-validate a label-powerset multi-label scenario");
        app->add_option("--data", data, "CSV with feature and label columns")->required();
        auto* l = app->add_option("--labels", labels, "Comma-separated label column names");
        auto* lc = app->add_option("--label-count", label_count, "Treat the last K columns as labels");
        l->excludes(lc);
        app->add_option("--scenario", scenario, "br, br+mb, mlp or mlp+mb")
            ->check(CLI::IsMember({"br", "br+mb", "mlp", "mlp+mb"}))
            ->capture_default_str();
        app->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
        app->add_option("--seed", seed, "Random seed")->required();
        app->add_option("--report", report, "Report JSON");
        app->add_option("--export-blocks", export_dir, "Write per-block CSVs under this directory");
        app->add_flag("--binarize", binarize, "Split numeric feature columns at the training median");
        app->add_option("--smoothing", smoothing, "Laplace pseudo-count of the classifier")->capture_default_str();
        flags.attach(app);
        app->callback([this] { run(); });
    }

    MlcProblem load() const {
        auto table = read_table(std::filesystem::path(data));
        const int d = static_cast<int>(table.header.size());
        std::vector<std::string> label_names;
        if (!labels.empty()) {
            label_names = split_names(labels);
        } else if (label_count > 0) {
            if (label_count >= d) throw UsageError("--label-count leaves no features");
            label_names.assign(table.header.end() - label_count, table.header.end());
        } else {
            throw UsageError("one of --labels or --label-count is required");
        }
        for (const auto& n : label_names) {
            if (std::find(table.header.begin(), table.header.end(), n) == table.header.end()) {
                throw DataError("no label column '" + n + "'");
            }
        }
        auto is_label = [&](const std::string& n) {
            return std::find(label_names.begin(), label_names.end(), n) != label_names.end();
        };

        // Constant feature columns carry no information; drop them.
        std::vector<int> keep;
        for (int c = 0; c < d; ++c) {
            std::set<std::string> seen;
            for (const auto& row : table.rows) {
                seen.insert(row[static_cast<std::size_t>(c)]);
                if (seen.size() > 1) break;
            }
            if (seen.size() > 1) {
                keep.push_back(c);
            } else if (is_label(table.header[c])) {
                throw DataError("label column '" + table.header[c] + "' is constant");
            } else {
                std::cerr << "note: dropping constant column '" << table.header[c] << "'\n";
            }
        }
        TextTable kept;
        for (int c : keep) kept.header.push_back(table.header[c]);
        std::map<int, std::vector<double>> numeric;
        for (int j = 0; j < static_cast<int>(keep.size()); ++j) {
            const int c = keep[j];
            if (!binarize || is_label(table.header[c]) || !is_numeric_column(table, c)) continue;
            auto values = numeric_column(table, c);
            if (std::set<double>(values.begin(), values.end()).size() > 2) numeric[j] = std::move(values);
        }
        // Categorical columns get first-appearance levels; numeric ones are
        // placeholders split at the full-data median until a fold re-splits them.
        TextTable cat;
        std::vector<int> cat_pos;
        for (int j = 0; j < static_cast<int>(keep.size()); ++j) {
            if (numeric.contains(j)) continue;
            cat.header.push_back(kept.header[j]);
            cat_pos.push_back(j);
        }
        for (const auto& row : table.rows) {
            std::vector<std::string> r;
            for (int j : cat_pos) r.push_back(row[static_cast<std::size_t>(keep[j])]);
            cat.rows.push_back(std::move(r));
        }
        const auto cat_data = from_table(cat);
        const int n = cat_data.n();
        std::vector<Variable> vars(keep.size());
        LevelMatrix cells(n, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < cat_pos.size(); ++i) {
            vars[cat_pos[i]] = cat_data.variable(static_cast<int>(i));
            cells.col(cat_pos[i]) = cat_data.column(static_cast<int>(i));
        }
        for (const auto& [j, values] : numeric) {
            vars[j] = Variable{kept.header[j], {"low", "high"}};
            const double m = median(values);
            for (int i = 0; i < n; ++i) cells(i, j) = values[static_cast<std::size_t>(i)] > m ? 1 : 0;
        }
        MlcProblem problem{CategoricalDataset(std::move(vars), std::move(cells)), {}, std::move(numeric)};
        for (const auto& name : label_names) insert(problem.labels, problem.data.index_of(name));
        return problem;
    }

    void run() const {
        if (folds < 2) throw UsageError("--folds must be >= 2");
        if (smoothing < 0) throw UsageError("--smoothing must be >= 0");
        MlcConfig cfg;
        cfg.learn = flags.resolve(*jobs);
        cfg.folds = folds;
        cfg.seed = seed;
        cfg.smoothing = smoothing;
        cfg.jobs = *jobs;
        const auto problem = load();
        if (folds > problem.data.n()) throw UsageError("--folds exceeds the number of rows");
        const auto sc = parse_scenario(scenario);
        const auto rep = run_scenario(problem, sc, cfg,
                                      export_dir.empty() ? std::nullopt
                                                         : std::optional<std::filesystem::path>(export_dir));

        const auto& ds = problem.data;
        auto names = [&](const NodeSet& s) {
            json a = json::array();
            for (int v : s) a.push_back(ds.name(v));
            return a;
        };
        json doc;
        doc["command"] = "mlc";
        doc["config"] = flags.to_json();
        doc["config"].update({{"data", data},
                              {"labels", names(problem.labels)},
                              {"scenario", scenario},
                              {"folds", folds},
                              {"seed", seed},
                              {"binarize", binarize},
                              {"smoothing", smoothing}});
        doc["data"] = {{"rows", ds.n()},
                       {"labels", problem.labels.size()},
                       {"features", problem.features().size()},
                       {"numeric", problem.numeric.size()}};
        doc["folds"] = json::array();
        for (const auto& fr : rep.folds) {
            json f = {{"fold", fr.fold}, {"train_rows", fr.train_rows}, {"test_rows", fr.test_rows},
                      {"accuracy", fr.accuracy}, {"blocks", json::array()}};
            for (std::size_t b = 0; b < fr.blocks.size(); ++b) {
                f["blocks"].push_back({{"labels", names(fr.blocks[b])},
                                       {"features", fr.features[b].size()},
                                       {"classes", fr.classes[b]}});
            }
            if (*timings) f["seconds"] = fr.seconds;
            doc["folds"].push_back(f);
        }
        doc["summary"] = {{"accuracy_mean", rep.mean_accuracy},
                          {"accuracy_sd", rep.sd_accuracy},
                          {"lps_mean", rep.mean_blocks},
                          {"labels_per_lp", rep.labels_per_block},
                          {"classes_per_lp", rep.classes_per_block}};
        if (!report.empty()) write_json(report, doc);
        std::printf("%s  accuracy %.4f +- %.4f  LPs %.1f  labels/LP %g/%g/%g\n", scenario.c_str(), rep.mean_accuracy,
                    rep.sd_accuracy, rep.mean_blocks, rep.labels_per_block[0], rep.labels_per_block[1],
                    rep.labels_per_block[2]);
    }
};

// ---------------------------------------------------------------- export-dot

struct ExportDotCmd {
    std::string net;
    std::string out;
    bool cpdag = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("export-dot", "Write a network's graph (or its CPDAG) as DOT");
        app->add_option("--net", net, "Network JSON")->required();
        app->add_option("--out", out, "Output DOT file (default: standard output)");
        app->add_flag("--cpdag", cpdag, "Write the equivalence-class pattern instead of the DAG");
        app->callback([this] { run(); });
    }

    void run() const {
        const auto network = read_network(std::filesystem::path(net));
        const auto names = network.names();
        std::ofstream file;
        if (!out.empty()) {
            file.open(out, std::ios::binary);
            if (!file) throw DataError("cannot write " + out);
        }
        std::ostream& os = out.empty() ? std::cout : file;
        if (cpdag) {
            write_dot(os, dag_to_cpdag(network.graph()), names);
        } else {
            write_dot(os, network.graph(), names);
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid HPC + hill-climbing structure learning for discrete Bayesian networks"};
    app.require_subcommand(1);
    int jobs = default_jobs();
    bool timings = false;
    app.add_option("--jobs", jobs, "Worker threads (default: $H2PC_JOBS or 1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--timings", timings, "Include wall-clock times in reports");

    SampleCmd sample;
    LearnCmd learn;
    LearnCmd learn_skeleton;
    EvaluateCmd evaluate;
    BenchmarkCmd benchmark;
    MlcCmd mlc;
    ExportDotCmd dot;
    sample.attach(app);
    learn.attach(app, jobs, timings);
    learn_skeleton.attach(app, jobs, timings, true);
    evaluate.attach(app);
    benchmark.attach(app, jobs, timings);
    mlc.attach(app, jobs, timings);
    dot.attach(app);
    app.fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
