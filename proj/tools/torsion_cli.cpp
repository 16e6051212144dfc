// Scenario-driven batch runner for landscape-function spectral bounds.
//
// Subcommands map onto the pipeline stages:
//   landscape    solve (-Delta + V + M) u = 1, write landscape.csv
//   count        eigenvalue counting curves, write curves.csv
//   bounds       run the requested inequality checks
//   iterate      the ground-state iteration M -> M - inf(1/u_M)
//   asymptotics  radial mu -> 0^- ratio table
//   run          everything the config asks for
//
// Exit codes: 0 all requested checks pass, 2 any violation or not-applicable
// check, 1 configuration or solver error.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "torsion/scenario.hpp"

namespace {

int run(const std::string& config_path, const std::string& out_flag, int threads,
        torsion::RunMode mode) {
    torsion::Scenario scenario = torsion::load_scenario(config_path);
    if (threads >= 0) scenario.threads = threads;

    std::string out = scenario.output_dir;
    if (const char* env = std::getenv("TORSION_OUT_DIR"); env && *env) out = env;
    if (!out_flag.empty()) out = out_flag;

    const int code = torsion::run_scenario(scenario, out, mode);
    if (code == 0)
        std::cout << "PASS: reports written to " << out << "\n";
    else
        std::cout << "FAIL: see " << out << "/report.json\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"landscape-function bounds for semi-bounded Schrodinger operators"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = -1;

    struct Sub {
        const char* name;
        const char* help;
        torsion::RunMode mode;
    };
    const Sub subs[] = {
        {"landscape", "solve the landscape equation and write landscape.csv",
         torsion::RunMode::landscape},
        {"count", "write eigenvalue counting curves", torsion::RunMode::count},
        {"bounds", "verify the requested inequality checks", torsion::RunMode::bounds},
        {"iterate", "run the ground-state iteration", torsion::RunMode::iterate},
        {"asymptotics", "radial mu -> 0^- ratio table", torsion::RunMode::asymptotics},
        {"run", "run the full scenario", torsion::RunMode::full},
    };

    torsion::RunMode mode = torsion::RunMode::full;
    for (const Sub& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        cmd->add_option("--config", config_path, "scenario JSON file")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config and env)");
        cmd->add_option("--threads", threads, "worker cap for parallel scans");
        cmd->callback([&mode, m = s.mode] { mode = m; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run(config_path, out_dir, threads, mode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
