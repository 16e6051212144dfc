#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsion/scenario.hpp"

using namespace torsion;
namespace fs = std::filesystem;

namespace {

ordered_json small_well_config() {
    return ordered_json::parse(R"({
        "potential": {"type": "square_well", "depth": 1.0, "half_width": 1.0},
        "grid": {"dimension": 1, "half_width": 12.0, "spacing": 0.004, "window": 9.0},
        "shift": 2.0,
        "mu_grid": {"min": 0.2, "max": 3.0, "count": 15},
        "mu_grid_negative": {"min": -0.4, "max": -0.05, "count": 8},
        "checks": ["comparison", "clr_sandwich", "kato_lower", "lt_two_sided"],
        "gamma": [1.0],
        "output_dir": "out"
    })");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("torsion_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("scenario round-trips through json") {
    const Scenario s = parse_scenario(small_well_config());
    CHECK(s.dimension == 1);
    CHECK(s.shift == 2.0);
    CHECK(s.mu_grid.size() == 15);
    CHECK(s.checks.size() == 4);
    const Scenario s2 = parse_scenario(scenario_json(s));
    CHECK(scenario_json(s2) == scenario_json(s));
}

TEST_CASE("scenario validation errors") {
    SUBCASE("window beyond the domain") {
        ordered_json bad = small_well_config();
        bad["grid"]["window"] = 15.0;
        CHECK_THROWS_AS(run_scenario(parse_scenario(bad), fs::temp_directory_path() / "x"),
                        ScenarioError);
    }
    SUBCASE("unknown check") {
        ordered_json bad = small_well_config();
        bad["checks"] = {"no_such_check"};
        CHECK_THROWS_AS(run_scenario(parse_scenario(bad), fs::temp_directory_path() / "x"),
                        ScenarioError);
    }
    SUBCASE("bounds without a shift") {
        ordered_json bad = small_well_config();
        bad.erase("shift");
        CHECK_THROWS_AS(run_scenario(parse_scenario(bad), fs::temp_directory_path() / "x"),
                        ScenarioError);
    }
    SUBCASE("unknown potential") {
        ordered_json bad = small_well_config();
        bad["potential"] = {{"type", "harmonic"}};
        CHECK_THROWS_AS(parse_scenario(bad), ScenarioError);
    }
}

TEST_CASE("run_scenario writes the full report set and passes") {
    TempDir dir("run");
    const Scenario s = parse_scenario(small_well_config());
    const int code = run_scenario(s, dir.path);
    CHECK(code == 0);
    for (const char* f : {"report.json", "landscape.csv", "curves.csv", "bounds_comparison.csv",
                          "bounds_clr_sandwich.csv", "bounds_kato_lower.csv",
                          "bounds_lt_two_sided.csv"})
        CHECK(fs::exists(dir.path / f));
    const ordered_json rep = ordered_json::parse(slurp(dir.path / "report.json"));
    CHECK(rep.at("status") == "PASS");
    CHECK(rep.at("bounds").size() == 4);
    CHECK(rep.at("config").at("shift") == 2.0);
    // landscape csv has the x,u,W header and one line per node
    const std::string land = slurp(dir.path / "landscape.csv");
    CHECK(land.rfind("x,u,W\n", 0) == 0);
}

TEST_CASE("repeated runs are byte-identical") {
    TempDir a("det_a"), b("det_b");
    const Scenario s = parse_scenario(small_well_config());
    REQUIRE(run_scenario(s, a.path) == 0);
    REQUIRE(run_scenario(s, b.path) == 0);
    for (const auto& entry : fs::directory_iterator(a.path)) {
        const fs::path other = b.path / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("thread cap does not change the outputs") {
    TempDir a("thr_a"), b("thr_b");
    Scenario s = parse_scenario(small_well_config());
    s.threads = 1;
    REQUIRE(run_scenario(s, a.path) == 0);
    s.threads = 4;
    REQUIRE(run_scenario(s, b.path) == 0);
    CHECK(slurp(a.path / "curves.csv") == slurp(b.path / "curves.csv"));
    CHECK(slurp(a.path / "bounds_comparison.csv") == slurp(b.path / "bounds_comparison.csv"));
}

TEST_CASE("iteration-only scenario") {
    TempDir dir("iter");
    ordered_json j = small_well_config();
    j.erase("checks");
    j["iteration"] = {{"start", 6.0}, {"tolerance", 1e-7}, {"max_steps", 200}};
    const int code = run_scenario(parse_scenario(j), dir.path, RunMode::iterate);
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / "iteration.csv"));
    const ordered_json rep = ordered_json::parse(slurp(dir.path / "report.json"));
    CHECK(rep.at("iteration").at("converged") == true);
}

TEST_CASE("radial scenario with counts and asymptotics") {
    TempDir dir("rad");
    const ordered_json j = ordered_json::parse(R"({
        "potential": {"type": "power_law", "exponent": 1.0},
        "grid": {"dimension": 3, "max_radius": 150.0, "spacing": 0.01, "window": 120.0},
        "shift": 1.0,
        "mu_grid_negative": {"values": [-0.15, -0.04]},
        "asymptotics": {"mu_values": [-0.05], "count_source": "numeric"},
        "output_dir": "out"
    })");
    const int code = run_scenario(parse_scenario(j), dir.path);
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / "asymptotics.csv"));
    CHECK(fs::exists(dir.path / "curves.csv"));
    const ordered_json rep = ordered_json::parse(slurp(dir.path / "report.json"));
    CHECK(rep.at("landscape").at("groundstate_lower_bound").get<double>() <= -0.25);
}

#ifdef TORSION_CLI_PATH
TEST_CASE("cli exit codes") {
    TempDir dir("cli");
    const std::string cli = TORSION_CLI_PATH;

    SUBCASE("bad config exits 1") {
        const fs::path cfg = dir.path / "bad.json";
        std::ofstream(cfg) << R"({"potential": {"type": "square_well", "depth": 1.0,
            "half_width": 1.0}, "grid": {"dimension": 1, "half_width": 4.0,
            "spacing": 0.05, "window": 6.0}})";
        const std::string cmd = cli + " landscape --config " + cfg.string() + " --out " +
                                (dir.path / "o1").string() + " >/dev/null 2>&1";
        CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
    }
    SUBCASE("missing config exits 1") {
        const std::string cmd =
            cli + " run --config /nonexistent.json >/dev/null 2>&1";
        CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
    }
    SUBCASE("passing scenario exits 0 and honors the env override") {
        const fs::path cfg = dir.path / "ok.json";
        std::ofstream(cfg) << small_well_config().dump();
        const fs::path env_out = dir.path / "env_out";
        const std::string cmd = "TORSION_OUT_DIR=" + env_out.string() + " " + cli +
                                " run --config " + cfg.string() + " >/dev/null 2>&1";
        CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
        CHECK(fs::exists(env_out / "report.json"));
    }
}
#endif
