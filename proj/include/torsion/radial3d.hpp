#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsion/analytic.hpp"
#include "torsion/bounds.hpp"
#include "torsion/potentials.hpp"
#include "torsion/spectral.hpp"

namespace torsion {

/// Radial grid r_j = j h, j = 1..R/h - 1, with Dirichlet conditions at 0 and R
/// in the reduced variable w = r u. The window radius keeps far-boundary
/// artifacts out of fits and minima.
struct RadialGrid {
    double spacing = 0.0;    // h
    double max_radius = 0.0; // R
    double window = 0.0;     // statistics restricted to r <= window
    std::vector<double> nodes;
    std::size_t window_end = 0; // one past the last node with r <= window

    std::size_t size() const { return nodes.size(); }
};

inline RadialGrid build_radial_grid(double spacing, double max_radius, double window) {
    if (!(spacing > 0.0) || !(spacing < max_radius))
        throw std::invalid_argument("build_radial_grid: need 0 < h < R");
    if (!(window > 0.0) || window > max_radius * (1.0 + 1e-12))
        throw std::invalid_argument("build_radial_grid: need 0 < window <= R");
    const double ratio = max_radius / spacing;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("build_radial_grid: R/h must be an integer");
    const auto intervals = static_cast<std::size_t>(rounded);
    RadialGrid g;
    g.spacing = spacing;
    g.max_radius = max_radius;
    g.window = window;
    g.nodes.resize(intervals - 1);
    for (std::size_t j = 0; j + 1 < intervals; ++j)
        g.nodes[j] = static_cast<double>(j + 1) * spacing;
    std::size_t e = g.nodes.size();
    while (e > 0 && g.nodes[e - 1] > window * (1.0 + 1e-12)) --e;
    g.window_end = e;
    return g;
}

namespace detail {

inline std::vector<double> radial_values(const PotentialSpec& spec, const RadialGrid& g) {
    if (spec.kind == PotentialKind::tabulated) {
        if (spec.samples.size() != g.size())
            throw std::invalid_argument("radial potential: tabulated length mismatch");
        return spec.samples;
    }
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = evaluate(spec, g.nodes[i]);
    return v;
}

// diagonal of the angular-momentum sector h_l = -d^2/dr^2 + l(l+1)/r^2 + V + M
inline std::vector<double> sector_diagonal(const std::vector<double>& v, const RadialGrid& g,
                                           long l, double shift) {
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    const double centrifugal = static_cast<double>(l) * static_cast<double>(l + 1);
    std::vector<double> diag(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        diag[i] = 2.0 * inv_h2 + centrifugal / (g.nodes[i] * g.nodes[i]) + v[i] + shift;
    return diag;
}

} // namespace detail

/// Eigenvalues of the sector h_l below mu, localized by bisection on the
/// sector counting function.
inline std::vector<double> radial_sector_spectrum(const PotentialSpec& spec, const RadialGrid& g,
                                                  long l, double mu, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("radial_sector_spectrum: tol must be positive");
    const std::vector<double> v = detail::radial_values(spec, g);
    const std::vector<double> diag = detail::sector_diagonal(v, g, l, 0.0);
    const double off = -1.0 / (g.spacing * g.spacing);
    const long k_total = detail::sturm_count_leq(diag, off, mu);
    double glo = std::numeric_limits<double>::infinity();
    for (double a : diag) glo = std::min(glo, a);
    glo -= 2.0 / (g.spacing * g.spacing);
    std::vector<double> eigs;
    for (long k = 1; k <= k_total; ++k) {
        double lo = glo, hi = mu;
        for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (detail::sturm_count_leq(diag, off, mid) >= k)
                hi = mid;
            else
                lo = mid;
        }
        eigs.push_back(0.5 * (lo + hi));
    }
    return eigs;
}

/// Counting function of -Delta + V for radial V in d = 3 at mu < 0:
/// sum over l of (2l+1) * count(h_l, mu). The l sum stops once two
/// consecutive sectors are empty, a cutoff the centrifugal barrier makes
/// safe; a property test re-checks counts with the cutoff pushed 5 higher.
inline long radial_count(const PotentialSpec& spec, double mu, const RadialGrid& g,
                         long l_extra = 0) {
    if (!(mu < 0.0)) throw std::invalid_argument("radial_count: mu must be negative");
    const std::vector<double> v = detail::radial_values(spec, g);
    const double off = -1.0 / (g.spacing * g.spacing);
    long total = 0;
    long empty_streak = 0;
    for (long l = 0; l < 100000; ++l) {
        const std::vector<double> diag = detail::sector_diagonal(v, g, l, 0.0);
        const long c = detail::sturm_count_leq(diag, off, mu);
        total += (2 * l + 1) * c;
        if (c == 0) {
            if (++empty_streak >= 2 + l_extra) break;
        } else {
            empty_streak = 0;
        }
    }
    return total;
}

/// Radial landscape field u(r) = w(r)/r with shift M and solve residual.
struct RadialLandscapeField {
    const RadialGrid* grid = nullptr;
    std::vector<double> u;
    double shift = 0.0;
    double residual = 0.0;
};

/// Solve (-Delta + V + M) u = 1 for radial data through the substitution
/// w = r u, which turns the l = 0 sector into -w'' + (V + M) w = r with
/// w(0) = w(R) = 0; regularity at the origin is exactly the Dirichlet
/// condition in w.
inline RadialLandscapeField radial_landscape(const PotentialSpec& spec, double shift,
                                             const RadialGrid& g) {
    const std::vector<double> v = detail::radial_values(spec, g);
    const std::vector<double> diag = detail::sector_diagonal(v, g, 0, shift);
    const double off = -1.0 / (g.spacing * g.spacing);
    const long bad = detail::sturm_count_leq(diag, off, 0.0);
    if (bad > 0) throw IndefiniteOperatorError(bad);

    std::vector<double> w(g.nodes.begin(), g.nodes.end()); // rhs r_j, solved in place
    if (!detail::ldlt_solve(diag, off, w))
        throw std::runtime_error("radial_landscape: factorization failed");
    RadialLandscapeField f;
    f.grid = &g;
    f.shift = shift;
    f.residual = detail::tridiag_residual(diag, off, w, g.nodes);
    if (f.residual > 1e-10)
        throw std::runtime_error("radial_landscape: relative residual " +
                                 std::to_string(f.residual) + " exceeds 1e-10");
    f.u.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        f.u[i] = w[i] / g.nodes[i];
        if (!(f.u[i] > 0.0))
            throw std::runtime_error("radial_landscape: positivity violated at r = " +
                                     std::to_string(g.nodes[i]));
    }
    return f;
}

inline std::vector<double> radial_effective_potential(const RadialLandscapeField& f) {
    std::vector<double> w(f.u.size());
    for (std::size_t i = 0; i < f.u.size(); ++i) w[i] = 1.0 / f.u[i] - f.shift;
    return w;
}

inline double radial_groundstate_lower_bound(const RadialLandscapeField& f) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.grid->window_end; ++i)
        best = std::min(best, 1.0 / f.u[i] - f.shift);
    return best;
}

/// 4 pi int (mu - W(r))_+^p r^2 dr for the computed effective potential. On
/// the grid the integrand is summed with trapezoidal weights; when the
/// classical region extends past the window (tiny |mu|) the analytic tail of
/// the potential family continues the integrand, using that W approaches V to
/// O(r^-2) in the far field. The optional Weyl flag divides by
/// (2 sqrt(pi))^3 Gamma(5/2) = 6 pi^2.
inline double radial_semiclassical_integral(const RadialLandscapeField& f,
                                            const PotentialSpec& tail_model, double mu,
                                            double power, bool weyl = false) {
    if (!(power > 0.0)) throw std::invalid_argument("radial_semiclassical_integral: power > 0");
    const RadialGrid& g = *f.grid;
    const std::vector<double> w = radial_effective_potential(f);

    double acc = 0.0;
    for (std::size_t i = 0; i < g.window_end; ++i) {
        const double t = mu - w[i];
        if (t <= 0.0) continue;
        const double r = g.nodes[i];
        const double weight = (i + 1 == g.window_end) ? 0.5 : 1.0;
        acc += weight * std::pow(t, power) * r * r;
    }
    acc *= g.spacing;

    // analytic tail beyond the window
    const double r_w = g.window;
    if (tail_model.kind == PotentialKind::power_law) {
        const double rho = tail_model.exponent;
        const double r_star = std::pow(-mu, -1.0 / rho); // turning radius of the tail
        if (r_star > r_w) {
            auto integrand = [&](double r) {
                const double t = mu + std::pow(r, -rho);
                return t > 0.0 ? std::pow(t, power) * r * r : 0.0;
            };
            // log-spaced panels up to 0.9 r*, then a sqrt substitution absorbs
            // the (r* - r)^power endpoint
            const double split = std::max(r_w, 0.9 * r_star);
            double tail = 0.0;
            {
                const int m = 2000;
                const double la = std::log(r_w), lb = std::log(split);
                if (lb > la) {
                    double prev = integrand(r_w) * r_w;
                    const double dl = (lb - la) / m;
                    for (int i = 1; i <= m; ++i) {
                        const double r = std::exp(la + i * dl);
                        const double cur = integrand(r) * r;
                        tail += 0.5 * (prev + cur) * dl;
                        prev = cur;
                    }
                }
            }
            {
                // r = r* - (r* - split) s^2
                const int m = 2000;
                const double span = r_star - split;
                if (span > 0.0) {
                    double prev = integrand(split) * 2.0 * span; // s = 1
                    for (int i = 1; i <= m; ++i) {
                        const double s = 1.0 - static_cast<double>(i) / m;
                        const double r = r_star - span * s * s;
                        const double cur = integrand(r) * 2.0 * span * s;
                        tail += 0.5 * (prev + cur) / m;
                        prev = cur;
                    }
                }
            }
            acc += tail;
        }
    } else if (tail_model.kind != PotentialKind::zero) {
        // compactly influenced potentials: W must already be above mu at the
        // window edge, otherwise the window truncates the classical region
        if (mu - w[g.window_end - 1] > 0.0)
            throw std::invalid_argument("radial_semiclassical_integral: classical region "
                                        "extends past the window; enlarge the grid");
    }

    acc *= 4.0 * M_PI;
    return weyl ? acc * weyl_prefactor(3) : acc;
}

struct AsymptoticsRow {
    double mu = 0.0;
    double count_exact = 0.0;       // oracle or inertia count of -Delta + V
    double semiclassical = 0.0;     // Weyl-prefactored integral of the effective potential
    double count_substituted = 0.0; // inertia count of -Delta + (1/u - M); NaN if infeasible
    double ratio_semiclassical = 0.0; // count_exact / semiclassical
    double ratio_substituted = 0.0;   // count_exact / count_substituted; NaN if infeasible
};

enum class CountSource { oracle, numeric };

/// Ratio table for the mu -> 0^- asymptotics: exact counts against (a) the
/// Weyl-prefactored phase-space integral of the computed effective potential
/// and (b) the counting function of the substituted operator
/// -Delta + (1/u - M). The oracle source is the closed-form hydrogen count
/// and requires the Coulomb potential.
inline std::vector<AsymptoticsRow> asymptotics_ratio(const PotentialSpec& spec, double shift,
                                                     std::span<const double> mu_values,
                                                     const RadialGrid& g,
                                                     CountSource source = CountSource::oracle) {
    for (std::size_t i = 0; i < mu_values.size(); ++i) {
        if (!(mu_values[i] < 0.0))
            throw std::invalid_argument("asymptotics_ratio: mu values must be negative");
        if (i > 0 && !(std::abs(mu_values[i]) < std::abs(mu_values[i - 1])))
            throw std::invalid_argument("asymptotics_ratio: |mu| must decrease");
    }
    if (source == CountSource::oracle &&
        !(spec.kind == PotentialKind::power_law && std::abs(spec.exponent - 1.0) < 1e-12))
        throw std::invalid_argument("asymptotics_ratio: the oracle count is the hydrogen "
                                    "spectrum; use numeric counts for other potentials");

    const RadialLandscapeField f = radial_landscape(spec, shift, g);
    const std::vector<double> w = radial_effective_potential(f);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<AsymptoticsRow> rows;
    rows.reserve(mu_values.size());
    for (double mu : mu_values) {
        AsymptoticsRow row;
        row.mu = mu;
        row.count_exact = source == CountSource::oracle
                              ? static_cast<double>(hydrogen_count(mu))
                              : static_cast<double>(radial_count(spec, mu, g));
        row.semiclassical = radial_semiclassical_integral(f, spec, mu, 1.5, /*weyl=*/true);
        row.ratio_semiclassical = row.semiclassical > 0.0 ? row.count_exact / row.semiclassical : nan;

        // the substituted count needs the whole classical region on the grid
        bool feasible = w[g.window_end - 1] > mu;
        if (feasible) {
            PotentialSpec sub = PotentialSpec::tabulated(w);
            row.count_substituted = static_cast<double>(radial_count(sub, mu, g));
            row.ratio_substituted = row.count_substituted > 0.0
                                        ? row.count_exact / row.count_substituted : nan;
        } else {
            row.count_substituted = nan;
            row.ratio_substituted = nan;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace torsion
