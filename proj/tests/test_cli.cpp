#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hslab/commands.hpp"
#include "hslab/serialize.hpp"

using namespace hslab;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "hslab_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

const char* kSmallRun = R"(
[params]
n = 3
alpha = 2
p = 5
q = 5
sigma1 = 0
sigma2 = 0

[grid]
r_min = 1e-3
r_max = 1e3
n = 384

[solver]
tol = 5e-5
max_iterations = 120

[analysis]
scan_radii = 5,20,100,500
)";

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults and overrides") {
        const RunConfig cfg = parse_config_text(kSmallRun);
        CHECK(cfg.p == 5);
        CHECK(cfg.grid_n == 384);
        CHECK(cfg.solver.tol == doctest::Approx(5e-5));
        CHECK(cfg.solver.damping == doctest::Approx(0.5));  // default kept
        CHECK(cfg.analysis.scan_radii.size() == 4);
        CHECK(cfg.output.solution == "solution.json");
    }

    SUBCASE("unknown keys and sections are rejected") {
        CHECK_THROWS_AS(parse_config_text("[params]\nzeta = 1\n"), DomainError);
        CHECK_THROWS_AS(parse_config_text("[nope]\nn = 3\n"), DomainError);
        CHECK_THROWS_AS(parse_config_text("n = 3\n"), DomainError);  // no section
        CHECK_THROWS_AS(parse_config_text("[params]\nn 3\n"), DomainError);
        CHECK_THROWS_AS(parse_config_text("[params]\nn = abc\n"), DomainError);
    }

    SUBCASE("sweep lists") {
        const RunConfig cfg =
            parse_config_text("[sweep]\np = 4, 4.5, 5\nsigma2 = 0, 0.25\n");
        CHECK(cfg.sweep.at("p").size() == 3);
        CHECK(cfg.sweep.at("sigma2").size() == 2);
        const RunConfig empty = parse_config_text("[sweep]\np =\n");
        CHECK(empty.sweep.at("p").empty());
    }

    SUBCASE("comments and blank lines") {
        const RunConfig cfg = parse_config_text(
            "# header comment\n\n[params]\np = 4.0  # inline\n");
        CHECK(cfg.p == doctest::Approx(4.0));
    }
}

TEST_CASE("classify command") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kSmallRun);

    SUBCASE("critical parameters") {
        const std::string out = tmp.file("classify.json");
        CHECK(cmd_classify(cfg, out) == kExitOk);
        const auto j = nlohmann::json::parse(read_file(out));
        CHECK(j["regime"]["kind"] == "critical");
        CHECK(j["exponents"]["q0"] == doctest::Approx(0.5));
        CHECK(j["exponents"]["v_case"] == "plain");
    }

    SUBCASE("pq <= 1 exits 2 with the nonexistence message") {
        cfg.p = 1;
        cfg.q = 1;
        CHECK(cmd_classify(cfg, "") == kExitUsage);
    }
}

TEST_CASE("solve, analyze, and determinism") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kSmallRun);

    const std::string sol = tmp.file("solution.json");
    REQUIRE(cmd_solve(cfg, sol, tmp.file("cache")) == kExitOk);

    SUBCASE("solution file round-trips") {
        const auto j = nlohmann::json::parse(read_file(sol));
        CHECK(j["status"] == "converged");
        CHECK(j["schema_version"] == kSchemaVersion);
        const SolutionBundle b = bundle_from_json(j);
        CHECK(b.converged());
        CHECK(b.u.grid->size() == 384);
    }

    SUBCASE("repeat runs are byte-identical") {
        const std::string sol2 = tmp.file("solution2.json");
        REQUIRE(cmd_solve(cfg, sol2, tmp.file("cache")) == kExitOk);
        CHECK(read_file(sol) == read_file(sol2));
    }

    SUBCASE("analyze emits the report and csv") {
        const std::string rep = tmp.file("report.json");
        const std::string csv = tmp.file("profile.csv");
        REQUIRE(cmd_analyze(cfg, sol, rep, csv, tmp.file("cache")) == kExitOk);
        const auto j = nlohmann::json::parse(read_file(rep));
        CHECK(j["rate_report"]["verdict"] == "fast_decay");
        CHECK(j["pohozaev"]["energy_gap"].get<double>() < 0.01);
        const std::string table = read_file(csv);
        CHECK(table.substr(0, 7) == "r,u,v,s");
        CHECK(std::count(table.begin(), table.end(), '\n') == 385);
    }

    SUBCASE("malformed solution file exits 2") {
        const std::string broken = tmp.file("broken.json");
        std::ofstream(broken) << "{ not json";
        CHECK(cmd_analyze(cfg, broken, tmp.file("r.json"), tmp.file("p.csv"), "")
              == kExitUsage);
    }

    SUBCASE("unwritable output exits 2") {
        RunConfig quick = cfg;
        quick.solver.max_iterations = 2;
        CHECK(cmd_solve(quick, "/nonexistent_dir/solution.json", "") == kExitUsage);
    }
}

TEST_CASE("solve exit codes follow the status") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kSmallRun);
    cfg.p = 4;
    cfg.q = 4;  // subcritical: no fixed point
    cfg.solver.max_iterations = 80;
    const int rc = cmd_solve(cfg, tmp.file("sub.json"), tmp.file("cache"));
    CHECK((rc == kExitNoFixedPoint || rc == kExitMaxIterations));
    const auto j = nlohmann::json::parse(read_file(tmp.file("sub.json")));
    CHECK(j["status"] != "converged");
}

TEST_CASE("sweep command") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kSmallRun);
    cfg.grid_n = 128;
    cfg.r_min = 1e-2;
    cfg.r_max = 1e2;
    cfg.solver.max_iterations = 25;
    cfg.sweep["p"] = {4.0, 4.5, 5.0};
    cfg.sweep["sigma2"] = {0.0, 0.25, 0.5};

    const std::string csv = tmp.file("sweep.csv");
    REQUIRE(cmd_sweep(cfg, csv, 2, tmp.file("cache")) == kExitOk);
    const std::string table = read_file(csv);
    CHECK(std::count(table.begin(), table.end(), '\n') == 10);  // header + 9 rows

    SUBCASE("deterministic across runs and job counts") {
        const std::string csv2 = tmp.file("sweep2.csv");
        REQUIRE(cmd_sweep(cfg, csv2, 1, tmp.file("cache")) == kExitOk);
        CHECK(read_file(csv) == read_file(csv2));
    }

    SUBCASE("empty range gives a header-only table") {
        RunConfig none = cfg;
        none.sweep.clear();
        none.sweep["p"] = {};
        const std::string csv3 = tmp.file("sweep3.csv");
        REQUIRE(cmd_sweep(none, csv3, 1, "") == kExitOk);
        const std::string header_only = read_file(csv3);
        CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);
    }
}

TEST_CASE("hls-check command") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kSmallRun);
    cfg.grid_n = 256;

    const std::string out = tmp.file("hls.json");
    REQUIRE(cmd_hls_check(cfg, out, tmp.file("cache")) == kExitOk);
    const auto j = nlohmann::json::parse(read_file(out));
    CHECK(j["index_check"]["valid"] == true);
    CHECK(j["dilation"]["variation"].get<double>() < 1e-3);

    SUBCASE("invalid indices exit 2") {
        RunConfig bad = cfg;
        bad.hls.r = 1.2;
        bad.hls.s = 7.0;  // breaks the index relation
        CHECK(cmd_hls_check(bad, tmp.file("bad.json"), "") == kExitUsage);
    }
}
