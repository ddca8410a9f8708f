#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/graphviz.hpp>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef H2PC_CLI_PATH
#define H2PC_CLI_PATH "h2pc"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = H2PC_CLI_PATH;

/// Exit status of the CLI run with the given arguments, output discarded.
int run(const std::string& args) {
    const int raw = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("h2pc_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& file) const { return (path / file).string(); }
};

const std::string net10 = testing::data_path("net10.json");

}  // namespace

TEST_CASE("sample writes the network's header at small and large n") {
    TempDir t("sample");
    REQUIRE(run("sample --net " + net10 + " --n 50 --seed 1 --out " + t / "a.csv") == 0);
    REQUIRE(run("sample --net " + net10 + " --n 50000 --seed 1 --out " + t / "b.csv") == 0);
    std::ifstream a(t / "a.csv");
    std::string header;
    std::getline(a, header);
    CHECK(header == "G,B,J,D,A,H,E,I,C,F");
    int lines = 0;
    std::ifstream b(t / "b.csv");
    for (std::string line; std::getline(b, line);) ++lines;
    CHECK(lines == 50001);
}

TEST_CASE("same seed gives the same bytes") {
    TempDir t("seed");
    run("sample --net " + net10 + " --n 300 --seed 4 --out " + t / "a.csv");
    run("sample --net " + net10 + " --n 300 --seed 4 --out " + t / "b.csv");
    run("sample --net " + net10 + " --n 300 --seed 5 --out " + t / "c.csv");
    CHECK(slurp(t / "a.csv") == slurp(t / "b.csv"));
    CHECK(slurp(t / "a.csv") != slurp(t / "c.csv"));
}

TEST_CASE("a size sweep writes one file per size") {
    TempDir t("sweep");
    const std::string sizes = "50,100,200,500,1000,2000,5000,10000,20000,50000";
    REQUIRE(run("sample --net " + net10 + " --sizes " + sizes + " --seed 2 --out-dir " + t / "sweep") == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(t.path / "sweep")) files += e.path().extension() == ".csv";
    CHECK(files == 10);
    CHECK(fs::exists(t.path / "sweep" / "sample_50000.csv"));
}

TEST_CASE("sample, learn, evaluate round trip") {
    TempDir t("roundtrip");
    REQUIRE(run("sample --net " + net10 + " --n 2000 --seed 3 --out " + t / "train.csv") == 0);
    REQUIRE(run("sample --net " + net10 + " --n 2000 --seed 4 --out " + t / "test.csv") == 0);
    REQUIRE(run("learn --data " + t / "train.csv" + " --out " + t / "net.json" + " --report " + t / "learn.json") == 0);
    REQUIRE(run("evaluate --learned " + t / "net.json" + " --truth " + net10 + " --train " + t / "train.csv" +
                " --test " + t / "test.csv" + " --report " + t / "eval.json") == 0);
    const auto learn = json::parse(slurp(t / "learn.json"));
    CHECK(learn.contains("config"));
    const auto eval = json::parse(slurp(t / "eval.json"));
    CHECK(eval.contains("shd"));
}

TEST_CASE("skeleton-only output has no DAG") {
    TempDir t("skeleton");
    run("sample --net " + net10 + " --n 1000 --seed 3 --out " + t / "d.csv");
    REQUIRE(run("learn --skeleton-only --data " + t / "d.csv" + " --out " + t / "s.json") == 0);
    const auto s = json::parse(slurp(t / "s.json"));
    CHECK(s.contains("edges"));
    CHECK_FALSE(s.contains("cpts"));
    REQUIRE(run("learn-skeleton --data " + t / "d.csv" + " --out " + t / "s2.json") == 0);
    CHECK(slurp(t / "s.json") == slurp(t / "s2.json"));
    // The saved skeleton can constrain a later search.
    CHECK(run("learn --data " + t / "d.csv" + " --skeleton " + t / "s.json" + " --out " + t / "n.json") == 0);
}

TEST_CASE("evaluating a network against itself gives SHD 0") {
    TempDir t("self");
    REQUIRE(run("evaluate --learned " + net10 + " --truth " + net10 + " --report " + t / "r.json") == 0);
    const auto r = json::parse(slurp(t / "r.json"));
    CHECK(r["shd"] == 0);
}

TEST_CASE("benchmark table shape") {
    TempDir t("bench");
    REQUIRE(run("benchmark --truth " + net10 + " --sizes 100,300 --repeats 2 --seed 1 --test-size 500 --out " +
                t / "b.csv") == 0);
    std::ifstream in(t / "b.csv");
    std::string header;
    std::getline(in, header);
    for (const char* col : {"size", "repeat", "precision", "recall", "fpr", "euclidean", "shd", "bdeu_train",
                            "bic_train", "bdeu_test", "bic_test"}) {
        CHECK(header.find(col) != std::string::npos);
    }
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("export-dot output parses as DOT") {
    TempDir t("dot");
    for (const std::string flag : {"", " --cpdag"}) {
        REQUIRE(run("export-dot --net " + net10 + flag + " --out " + t / "g.dot") == 0);
        boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS, boost::property<boost::vertex_name_t, std::string>>
            g;
        boost::dynamic_properties dp(boost::ignore_other_properties);
        dp.property("node_id", get(boost::vertex_name, g));
        std::ifstream in(t / "g.dot");
        REQUIRE(boost::read_graphviz(in, g, dp));
        CHECK(boost::num_vertices(g) == 10);
        CHECK(boost::num_edges(g) == 12);
    }
}

TEST_CASE("mlc scenarios complete on the six-label fixture") {
    TempDir t("mlc");
    const std::string data = testing::data_path("mlc6.csv");
    for (const std::string s : {"br", "mlp"}) {
        CHECK(run("mlc --data " + data + " --label-count 6 --scenario " + s + " --folds 3 --seed 1 --report " +
                  t / (s + ".json")) == 0);
        const auto r = json::parse(slurp(t / (s + ".json")));
        CHECK(r["folds"].size() == 3);
    }
}

TEST_CASE("exit codes: 1 for usage errors, 2 for data errors") {
    TempDir t("codes");
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("sample --net " + net10 + " --n 10") == 1);
    CHECK(run("learn --data " + t / "missing.csv" + " --out " + t / "x.json") == 2);
    std::ofstream(t / "ragged.csv") << "a,b,c\n1,2\n";
    CHECK(run("learn --data " + t / "ragged.csv" + " --out " + t / "x.json") == 2);
    std::ofstream(t / "bad.json") << "{\"variables\": 3}";
    CHECK(run("sample --net " + t / "bad.json" + " --n 10 --seed 1 --out " + t / "y.csv") == 2);
    CHECK(run("learn --data " + testing::data_path("mlc6.csv") + " --out " + t / "x.json" + " --alpha 0") == 1);
}
