#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsion/analytic.hpp"
#include "torsion/bounds.hpp"
#include "torsion/groundstate.hpp"
#include "torsion/io.hpp"
#include "torsion/landscape.hpp"
#include "torsion/parallel.hpp"
#include "torsion/potentials.hpp"
#include "torsion/radial3d.hpp"
#include "torsion/spectral.hpp"

namespace torsion {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully-resolved batch description: potential, grid, shift or iteration
/// request, mu grids, requested checks and output location. Parsed from a
/// single JSON document; the resolved form is embedded in report.json so a
/// run can be reproduced from its own output.
struct Scenario {
    PotentialSpec potential;
    int dimension = 1;
    double half_width = 0.0; // L (d = 1)
    double max_radius = 0.0; // R (d = 3)
    double spacing = 0.0;
    double window = 0.0;
    std::optional<double> shift;
    struct Iteration {
        double start = 0.0;
        double tolerance = 1e-9;
        int max_steps = 200;
    };
    std::optional<Iteration> iteration;
    std::vector<double> mu_grid;          // positive-side checks and curves
    std::vector<double> mu_grid_negative; // negative-side checks
    std::vector<std::string> checks;
    std::vector<double> gammas;
    double box_c = 2.0;
    double clr_epsilon_factor = 1e-6;
    std::optional<double> lt_upper_constant;
    struct Asymptotics {
        std::vector<double> mu_values;
        CountSource source = CountSource::oracle;
    };
    std::optional<Asymptotics> asymptotics;
    bool kato_norm = false;
    std::string output_dir = "out";
    int threads = 0;
};

namespace detail {

inline std::vector<double> parse_mu_grid(const ordered_json& j, const std::string& key) {
    std::vector<double> out;
    if (j.contains("values")) {
        out = j.at("values").get<std::vector<double>>();
    } else {
        const double lo = j.at("min").get<double>();
        const double hi = j.at("max").get<double>();
        const int n = j.at("count").get<int>();
        if (n < 1) throw ScenarioError(key + ": count must be >= 1");
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    if (out.empty()) throw ScenarioError(key + ": empty grid");
    return out;
}

} // namespace detail

inline PotentialSpec parse_potential(const ordered_json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") return PotentialSpec::zero();
    if (type == "square_well")
        return PotentialSpec::square_well(j.at("depth").get<double>(),
                                          j.at("half_width").get<double>());
    if (type == "power_law") return PotentialSpec::power_law(j.at("exponent").get<double>());
    if (type == "tabulated")
        return PotentialSpec::tabulated(j.at("values").get<std::vector<double>>());
    throw ScenarioError("unknown potential type '" + type + "'");
}

inline ordered_json potential_json(const PotentialSpec& p) {
    ordered_json j;
    switch (p.kind) {
    case PotentialKind::zero: j["type"] = "zero"; break;
    case PotentialKind::square_well:
        j["type"] = "square_well";
        j["depth"] = p.depth;
        j["half_width"] = p.half_width;
        break;
    case PotentialKind::power_law:
        j["type"] = "power_law";
        j["exponent"] = p.exponent;
        break;
    case PotentialKind::tabulated:
        j["type"] = "tabulated";
        j["values"] = p.samples;
        break;
    }
    return j;
}

inline Scenario parse_scenario(const ordered_json& j) {
    Scenario s;
    try {
        s.potential = parse_potential(j.at("potential"));
        const ordered_json& g = j.at("grid");
        s.dimension = g.at("dimension").get<int>();
        s.spacing = g.at("spacing").get<double>();
        s.window = g.at("window").get<double>();
        if (s.dimension == 1)
            s.half_width = g.at("half_width").get<double>();
        else if (s.dimension == 3)
            s.max_radius = g.at("max_radius").get<double>();
        else
            throw ScenarioError("grid.dimension must be 1 or 3");

        if (j.contains("shift")) s.shift = j.at("shift").get<double>();
        if (j.contains("iteration")) {
            Scenario::Iteration it;
            it.start = j.at("iteration").at("start").get<double>();
            it.tolerance = j.at("iteration").value("tolerance", 1e-9);
            it.max_steps = j.at("iteration").value("max_steps", 200);
            s.iteration = it;
        }
        if (j.contains("mu_grid")) s.mu_grid = detail::parse_mu_grid(j.at("mu_grid"), "mu_grid");
        if (j.contains("mu_grid_negative"))
            s.mu_grid_negative = detail::parse_mu_grid(j.at("mu_grid_negative"), "mu_grid_negative");
        if (j.contains("checks")) s.checks = j.at("checks").get<std::vector<std::string>>();
        if (j.contains("gamma")) s.gammas = j.at("gamma").get<std::vector<double>>();
        s.box_c = j.value("box_constant_c", 2.0);
        s.clr_epsilon_factor = j.value("clr_epsilon_factor", 1e-6);
        if (j.contains("lt_upper_constant") && !j.at("lt_upper_constant").is_null())
            s.lt_upper_constant = j.at("lt_upper_constant").get<double>();
        if (j.contains("asymptotics")) {
            Scenario::Asymptotics a;
            a.mu_values = j.at("asymptotics").at("mu_values").get<std::vector<double>>();
            const std::string src = j.at("asymptotics").value("count_source", "oracle");
            if (src == "oracle")
                a.source = CountSource::oracle;
            else if (src == "numeric")
                a.source = CountSource::numeric;
            else
                throw ScenarioError("asymptotics.count_source must be oracle or numeric");
            s.asymptotics = a;
        }
        s.kato_norm = j.value("kato_norm", false);
        s.output_dir = j.value("output_dir", std::string("out"));
        s.threads = j.value("threads", 0);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("config: ") + e.what());
    }
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ScenarioError("cannot read config file " + config_path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("config parse error: ") + e.what());
    }
    return parse_scenario(j);
}

inline ordered_json scenario_json(const Scenario& s) {
    ordered_json j;
    j["potential"] = potential_json(s.potential);
    ordered_json g;
    g["dimension"] = s.dimension;
    if (s.dimension == 1)
        g["half_width"] = s.half_width;
    else
        g["max_radius"] = s.max_radius;
    g["spacing"] = s.spacing;
    g["window"] = s.window;
    j["grid"] = g;
    if (s.shift) j["shift"] = *s.shift;
    if (s.iteration)
        j["iteration"] = {{"start", s.iteration->start},
                          {"tolerance", s.iteration->tolerance},
                          {"max_steps", s.iteration->max_steps}};
    if (!s.mu_grid.empty()) j["mu_grid"] = {{"values", s.mu_grid}};
    if (!s.mu_grid_negative.empty()) j["mu_grid_negative"] = {{"values", s.mu_grid_negative}};
    if (!s.checks.empty()) j["checks"] = s.checks;
    if (!s.gammas.empty()) j["gamma"] = s.gammas;
    j["box_constant_c"] = s.box_c;
    j["clr_epsilon_factor"] = s.clr_epsilon_factor;
    if (s.lt_upper_constant) j["lt_upper_constant"] = *s.lt_upper_constant;
    if (s.asymptotics)
        j["asymptotics"] = {
            {"mu_values", s.asymptotics->mu_values},
            {"count_source", s.asymptotics->source == CountSource::oracle ? "oracle" : "numeric"}};
    j["kato_norm"] = s.kato_norm;
    j["output_dir"] = s.output_dir;
    j["threads"] = s.threads;
    return j;
}

enum class RunMode { landscape, count, bounds, iterate, asymptotics, full };

namespace detail {

inline const std::set<std::string>& known_checks() {
    static const std::set<std::string> k = {"comparison",     "clr_sandwich",
                                            "kato_lower",     "kato_sublevel_lower",
                                            "kato_clr_upper", "lt_two_sided"};
    return k;
}

inline bool wants(const Scenario& s, const std::string& check) {
    for (const std::string& c : s.checks)
        if (c == check) return true;
    return false;
}

inline void validate(const Scenario& s, RunMode mode) {
    if (!(s.spacing > 0.0)) throw ScenarioError("grid.spacing must be positive");
    if (s.dimension == 1 && s.window > s.half_width)
        throw ScenarioError("grid.window must not exceed grid.half_width");
    if (s.dimension == 3 && s.window > s.max_radius)
        throw ScenarioError("grid.window must not exceed grid.max_radius");
    for (const std::string& c : s.checks)
        if (!known_checks().count(c)) throw ScenarioError("unknown check '" + c + "'");

    const bool bounds_mode = mode == RunMode::bounds || (mode == RunMode::full && !s.checks.empty());
    if (bounds_mode) {
        if (s.dimension != 1)
            throw ScenarioError("bound verification runs on the 1d grid; use the radial "
                                "pipeline through 'asymptotics' in d = 3");
        if (!s.shift) throw ScenarioError("bound verification needs a shift M");
        if ((wants(s, "comparison") || wants(s, "clr_sandwich") || wants(s, "lt_two_sided")) &&
            s.mu_grid.empty())
            throw ScenarioError("comparison/clr_sandwich/lt_two_sided need mu_grid");
        if ((wants(s, "kato_lower") || wants(s, "kato_sublevel_lower") ||
             wants(s, "kato_clr_upper")) &&
            s.mu_grid_negative.empty())
            throw ScenarioError("kato checks need mu_grid_negative");
        if (wants(s, "lt_two_sided") && s.gammas.empty())
            throw ScenarioError("lt_two_sided needs a gamma list");
    }
    if (mode == RunMode::landscape && !s.shift)
        throw ScenarioError("landscape needs a shift M");
    if (mode == RunMode::iterate && !s.iteration)
        throw ScenarioError("iterate needs an iteration block");
    if ((mode == RunMode::iterate || (mode == RunMode::full && s.iteration)) && s.dimension != 1)
        throw ScenarioError("the iteration runs on the 1d grid");
    if (mode == RunMode::asymptotics && !s.asymptotics)
        throw ScenarioError("asymptotics needs an asymptotics block");
    if ((mode == RunMode::asymptotics || (mode == RunMode::full && s.asymptotics)) &&
        s.dimension != 3)
        throw ScenarioError("asymptotics needs the radial d = 3 grid");
    if (s.asymptotics && !s.shift &&
        (mode == RunMode::asymptotics || mode == RunMode::full))
        throw ScenarioError("asymptotics needs a shift M");
}

} // namespace detail

/// Execute a scenario and write report.json plus the CSV products into
/// out_dir. Returns 0 when every requested check passes, 2 when any check
/// fails or is not applicable; configuration and solver errors throw
/// ScenarioError / std::exception (the CLI maps those to exit 1).
inline int run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                        RunMode mode = RunMode::full) {
    detail::validate(s, mode);
    worker_cap() = s.threads;
    std::filesystem::create_directories(out_dir);

    ordered_json report;
    report["config"] = scenario_json(s);
    std::vector<BoundsReport> bound_reports;
    std::vector<CountingCurve> curves;
    bool any_failure = false;

    if (s.kato_norm && s.potential.kind != PotentialKind::tabulated) {
        const KatoEstimate k = kato_norm_estimate(s.potential, s.dimension);
        report["kato_norm"] = {{"value", k.value}, {"scan_resolution", k.scan_resolution}};
    }

    if (s.dimension == 1) {
        const Grid grid = build_grid(1, s.half_width, s.spacing, s.window);
        const PotentialField v = sample_potential(s.potential, grid);
        const DiscreteOperator op0 = assemble(v, 0.0);

        if (s.shift) {
            const double margin = s.half_width - s.window;
            if (margin * std::sqrt(*s.shift) < 10.0)
                report["warnings"] = ordered_json::array(
                    {"margin L - W is below 10/sqrt(M); boundary-layer leakage into the "
                     "window can reach exp(-sqrt(M)(L-W))"});
        }

        std::optional<LandscapeField> u;
        if (s.shift) {
            u = solve_landscape(assemble(v, *s.shift));
            report["landscape"] = {{"shift", *s.shift},
                                   {"residual", u->residual},
                                   {"window_min_u", u->window_min_u()},
                                   {"window_max_u", u->window_max_u()},
                                   {"groundstate_lower_bound", groundstate_lower_bound(*u)}};
            if (mode == RunMode::landscape || mode == RunMode::full)
                write_text_file(out_dir / "landscape.csv", landscape_csv(*u));
        }

        if (mode == RunMode::count || mode == RunMode::full) {
            std::vector<double> mus = s.mu_grid;
            mus.insert(mus.end(), s.mu_grid_negative.begin(), s.mu_grid_negative.end());
            std::sort(mus.begin(), mus.end());
            mus.erase(std::unique(mus.begin(), mus.end()), mus.end());
            if (!mus.empty()) {
                CountingCurve c;
                c.provenance = CurveProvenance::inertia;
                c.mu = mus;
                c.count.assign(mus.size(), 0);
                parallel_for(mus.size(),
                             [&](std::size_t i) { c.count[i] = count_below(op0, c.mu[i]); });
                curves.push_back(std::move(c));
            }
        }

        if (!s.checks.empty() && (mode == RunMode::bounds || mode == RunMode::full)) {
            const DiscreteOperator opM = assemble(v, *s.shift);
            const HarnackDiagnostics harn = harnack_for_mu_grid(*u, s.mu_grid, s.box_c);
            report["harnack"] = harnack_json(harn);

            if (detail::wants(s, "comparison"))
                bound_reports.push_back(verify_comparison(*u, s.mu_grid, harn));
            if (detail::wants(s, "clr_sandwich"))
                bound_reports.push_back(verify_clr_sandwich(opM, *u, s.mu_grid, harn));
            if (detail::wants(s, "kato_lower")) {
                bound_reports.push_back(
                    verify_kato_lower(op0, *u, s.mu_grid_negative, s.box_c, harn));
                CountingCurve nc;
                nc.provenance = CurveProvenance::box_n_c;
                nc.mu = s.mu_grid_negative;
                std::sort(nc.mu.begin(), nc.mu.end());
                for (double mu : nc.mu)
                    nc.count.push_back(box_counts(*u, mu, BoxCountMode::n_c, s.box_c, harn.a_m));
                curves.push_back(std::move(nc));
            }
            if (detail::wants(s, "kato_sublevel_lower"))
                bound_reports.push_back(
                    verify_kato_sublevel_lower(op0, *u, s.mu_grid_negative, s.box_c, harn));
            if (detail::wants(s, "kato_clr_upper")) {
                const std::vector<double> w = effective_potential(*u);
                std::vector<double> counts(s.mu_grid_negative.size());
                std::vector<double> ints(s.mu_grid_negative.size());
                parallel_for(s.mu_grid_negative.size(), [&](std::size_t i) {
                    const double mu = s.mu_grid_negative[i];
                    counts[i] = static_cast<double>(count_below(op0, mu));
                    ints[i] = semiclassical_integral(grid, w,
                                                     mu + s.clr_epsilon_factor * std::abs(mu), 0.5);
                });
                bound_reports.push_back(
                    verify_kato_clr_upper(s.mu_grid_negative, counts, ints, harn.a_m, 1));
            }
            if (detail::wants(s, "lt_two_sided")) {
                const std::vector<double> eigs = spectrum_below(op0, 0.0, 1e-12);
                LtOptions opt;
                opt.gammas = s.gammas;
                opt.c = s.box_c;
                opt.lt_upper_constant = s.lt_upper_constant;
                bound_reports.push_back(verify_lt_two_sided(*u, eigs, harn, opt));
                report["negative_spectrum"] = eigs;
            }

            // curves the box checks looked at, for plotting
            if (mode == RunMode::full || mode == RunMode::bounds) {
                const DiscreteOperator* ops[2] = {&op0, &opM};
                for (int k = 0; k < 2; ++k) {
                    CountingCurve c;
                    c.provenance = CurveProvenance::inertia;
                    c.mu = k == 0 ? s.mu_grid_negative : s.mu_grid;
                    if (c.mu.empty()) continue;
                    std::sort(c.mu.begin(), c.mu.end());
                    c.count.assign(c.mu.size(), 0);
                    parallel_for(c.mu.size(),
                                 [&](std::size_t i) { c.count[i] = count_below(*ops[k], c.mu[i]); });
                    curves.push_back(std::move(c));
                }
                for (BoxCountMode bm : {BoxCountMode::N, BoxCountMode::n}) {
                    CountingCurve c;
                    c.provenance =
                        bm == BoxCountMode::N ? CurveProvenance::box_N : CurveProvenance::box_n;
                    for (double mu : s.mu_grid) {
                        if (!(mu > 0.0)) continue;
                        const double side = 1.0 / std::sqrt(mu);
                        if (side < grid.spacing || side > 2.0 * grid.window) continue;
                        c.mu.push_back(mu);
                        c.count.push_back(box_counts(*u, mu, bm));
                    }
                    if (!c.mu.empty()) curves.push_back(std::move(c));
                }
                CountingCurve vol;
                vol.provenance = CurveProvenance::sublevel_volume_scaled;
                const std::vector<double> inv_u = [&] {
                    std::vector<double> r(u->u.size());
                    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 / u->u[i];
                    return r;
                }();
                for (double mu : s.mu_grid) {
                    if (!(mu > 0.0)) continue;
                    vol.mu.push_back(mu);
                    vol.count.push_back(static_cast<long>(
                        std::floor(std::sqrt(mu) * sublevel_volume(grid, inv_u, mu))));
                }
                if (!vol.mu.empty()) curves.push_back(std::move(vol));
            }
        }

        if (s.iteration && (mode == RunMode::iterate || mode == RunMode::full)) {
            const IterationTrace trace = iterate_M(s.potential, grid, s.iteration->start,
                                                   s.iteration->tolerance, s.iteration->max_steps);
            report["iteration"] = iteration_json(trace);
            write_text_file(out_dir / "iteration.csv", iteration_csv(trace));
            if (!trace.converged) any_failure = true;
        }
    } else {
        const RadialGrid grid = build_radial_grid(s.spacing, s.max_radius, s.window);
        std::optional<RadialLandscapeField> f;
        if (s.shift) {
            f = radial_landscape(s.potential, *s.shift, grid);
            report["landscape"] = {{"shift", *s.shift},
                                   {"residual", f->residual},
                                   {"groundstate_lower_bound", radial_groundstate_lower_bound(*f)}};
            if (mode == RunMode::landscape || mode == RunMode::full)
                write_text_file(out_dir / "landscape.csv", radial_landscape_csv(*f));
        }
        if ((mode == RunMode::count || mode == RunMode::full) && !s.mu_grid_negative.empty()) {
            CountingCurve c;
            c.provenance = CurveProvenance::inertia;
            c.mu = s.mu_grid_negative;
            std::sort(c.mu.begin(), c.mu.end());
            c.count.assign(c.mu.size(), 0);
            parallel_for(c.mu.size(), [&](std::size_t i) {
                c.count[i] = radial_count(s.potential, c.mu[i], grid);
            });
            // the hydrogen oracle curve rides along for cross-checks
            if (s.potential.kind == PotentialKind::power_law &&
                std::abs(s.potential.exponent - 1.0) < 1e-12) {
                CountingCurve oracle;
                oracle.provenance = CurveProvenance::analytic;
                oracle.mu = c.mu;
                for (double mu : oracle.mu) oracle.count.push_back(hydrogen_count(mu));
                curves.push_back(std::move(oracle));
            }
            curves.push_back(std::move(c));
        }
        if (s.asymptotics && (mode == RunMode::asymptotics || mode == RunMode::full)) {
            const auto rows = asymptotics_ratio(s.potential, *s.shift, s.asymptotics->mu_values,
                                                grid, s.asymptotics->source);
            write_text_file(out_dir / "asymptotics.csv", asymptotics_csv(rows));
            ordered_json ja = ordered_json::array();
            for (const AsymptoticsRow& r : rows) {
                ordered_json row;
                row["mu"] = r.mu;
                row["count_exact"] = r.count_exact;
                row["semiclassical"] = r.semiclassical;
                row["count_substituted"] =
                    std::isnan(r.count_substituted) ? ordered_json(nullptr)
                                                    : ordered_json(r.count_substituted);
                row["ratio_b"] = std::isnan(r.ratio_semiclassical)
                                     ? ordered_json(nullptr)
                                     : ordered_json(r.ratio_semiclassical);
                row["ratio_c"] = std::isnan(r.ratio_substituted)
                                     ? ordered_json(nullptr)
                                     : ordered_json(r.ratio_substituted);
                ja.push_back(row);
            }
            report["asymptotics"] = ja;
        }
    }

    if (!curves.empty()) write_text_file(out_dir / "curves.csv", curves_csv(curves));

    ordered_json jb = ordered_json::array();
    for (const BoundsReport& rep : bound_reports) {
        jb.push_back(bounds_json(rep));
        write_text_file(out_dir / ("bounds_" + rep.kind + ".csv"), bounds_csv(rep));
        if (rep.status != ReportStatus::pass) any_failure = true;
    }
    if (!jb.empty()) report["bounds"] = jb;
    report["status"] = any_failure ? "FAIL" : "PASS";
    write_text_file(out_dir / "report.json", report.dump(2) + "\n");
    return any_failure ? 2 : 0;
}

} // namespace torsion
