#include <catch2/catch_amalgamated.hpp>

#include <bnlearn/bnlearn.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace bnlearn;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(BNLEARN_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("bnlearn_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("adversarial level 1") {
    TempDir dir;
    REQUIRE(run("adversarial -j 1 -o " + dir / "d1.csv").code == 0);
    CHECK(slurp(dir / "d1.csv") == "x1:2,y:2\n0,0\n1,1\n");
}

TEST_CASE("learn K2 on the deterministic pair") {
    TempDir dir;
    write_text(dir / "pair.csv", "x:2,y:2\n0,0\n0,0\n1,1\n1,1\n");
    auto r = run("learn --data " + dir / "pair.csv" + " --algo k2 --measure mdl --ordering x,y -o " + dir / "out.bn");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("-7.000000") != std::string::npos);
    auto net = read_network(dir / "out.bn");
    CHECK(net.structure().has_arc(0, 1));
    CHECK(net.structure().arc_count() == 1);
    CHECK(net.cpt(1)(0, 0) == 0.75);

    auto w = run("learn --data " + dir / "pair.csv" + " --algo wk2 --measure mdl --ordering file-order -o " +
                 dir / "w.bn");
    REQUIRE(w.code == 0);
    CHECK(read_network(dir / "w.bn").cpt(1)(0, 0) == Catch::Approx(13.0 / 18.0).margin(1e-12));

    CHECK(run("learn --data " + dir / "pair.csv" + " --algo k2 --measure mdl -o " + dir / "o.bn").code == 1);
    CHECK(run("learn --data " + dir / "pair.csv" + " --algo k2 --measure mdl --ordering x,z -o " + dir / "o.bn")
              .code == 1);
}

TEST_CASE("score, sample and eval round trip") {
    TempDir dir;
    REQUIRE(run("gen-net --nodes 5 --max-parents 2 --seed 3 -o " + dir / "gold.bn").code == 0);
    REQUIRE(run("sample --net " + dir / "gold.bn" + " -n 200 --seed 4 -o " + dir / "db.csv").code == 0);
    auto db = read_database(dir / "db.csv");
    CHECK(db.case_count() == 200);

    auto e = run("eval --true " + dir / "gold.bn" + " --learned " + dir / "gold.bn");
    REQUIRE(e.code == 0);
    CHECK(e.out.find("divergence (log2): 0.000000") != std::string::npos);
    CHECK(e.out.find("extra_arcs: 0\nmissing_arcs: 0\nextra_edges: 0\nmissing_edges: 0") != std::string::npos);

    for (const char* algo : {"b", "wb", "exhaustive"}) {
        auto l = run("learn --data " + dir / "db.csv" + " --algo " + algo + " --measure bayes -o " + dir / "l.bn");
        REQUIRE(l.code == 0);
        auto learned = read_network(dir / "l.bn");
        auto s = run("score --data " + dir / "db.csv" + " --net " + dir / "l.bn" + " --measure bayes");
        REQUIRE(s.code == 0);
        // The reported search score and the recomputed one print identically.
        CHECK(l.out.substr(0, l.out.find('\n')) == s.out.substr(0, s.out.find('\n')));
    }
}

TEST_CASE("outputs are byte-identical across runs") {
    TempDir dir;
    run("gen-net --nodes 6 --max-parents 3 --seed 11 -o " + dir / "a.bn");
    run("gen-net --nodes 6 --max-parents 3 --seed 11 -o " + dir / "b.bn");
    CHECK(slurp(dir / "a.bn") == slurp(dir / "b.bn"));
    run("sample --net " + dir / "a.bn" + " -n 100 --seed 1 -o " + dir / "a.csv");
    run("sample --net " + dir / "a.bn" + " -n 100 --seed 1 -o " + dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run("").code == 1);
    CHECK(run("no-such-command").code == 1);
    CHECK(run("learn --data x.csv --algo magic --measure mdl -o y").code == 1);
    CHECK(run("learn --data " + dir / "missing.csv" + " --algo b --measure mdl -o " + dir / "y.bn").code == 2);

    write_text(dir / "bad.csv", "x:2,y:2\n0,0\n0\n");
    CHECK(run("learn --data " + dir / "bad.csv" + " --algo b --measure mdl -o " + dir / "y.bn").code == 2);

    REQUIRE(run("adversarial -j 8 -o " + dir / "d8.csv").code == 0);
    CHECK(run("learn --data " + dir / "d8.csv" + " --algo exhaustive --measure mdl -o " + dir / "y.bn").code == 3);

    REQUIRE(run("gen-net --nodes 23 --seed 1 -o " + dir / "big.bn").code == 0);
    CHECK(run("eval --true " + dir / "big.bn" + " --learned " + dir / "big.bn").code == 3);
}

TEST_CASE("experiment writes its reports") {
    TempDir dir;
    write_text(dir / "grid.json", R"({"networks": 2, "variables": 4, "sample_sizes": [30], "jobs": 1})");
    auto r = run("experiment --config " + dir / "grid.json" + " -o " + dir / "report");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "report/report.csv"));
    CHECK(fs::exists(dir / "report/raw.csv"));
    CHECK(fs::exists(dir / "report/table.txt"));
    write_text(dir / "bad.json", R"({"networks": 2, "colour": "red"})");
    CHECK(run("experiment --config " + dir / "bad.json" + " -o " + dir / "x").code == 2);
}
