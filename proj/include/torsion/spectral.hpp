#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsion/grid.hpp"
#include "torsion/potentials.hpp"

namespace torsion {

namespace detail {

// One LDL^T pivot sweep of (T - mu I) for a symmetric tridiagonal matrix with
// constant off-diagonal. Returns the number of nonpositive pivots, i.e. the
// number of eigenvalues <= mu when no pivot vanishes. A vanishing pivot is
// reported through hit_zero and must be resolved by the caller.
inline long sturm_pass(std::span<const double> diag, double off, double mu, bool& hit_zero) {
    hit_zero = false;
    const double off2 = off * off;
    long count = 0;
    double d = std::numeric_limits<double>::infinity(); // no coupling below the first row
    for (double a : diag) {
        d = (a - mu) - off2 / d;
        if (d == 0.0) { hit_zero = true; return count; }
        if (d < 0.0) ++count;
    }
    return count;
}

// Eigenvalue count of the tridiagonal operator in (-inf, mu]. A zero pivot
// means mu hits an eigenvalue of a leading principal submatrix; re-running at
// mu plus an ulp-scale nudge keeps the <=-convention and never loses a count.
inline long sturm_count_leq(std::span<const double> diag, double off, double mu) {
    double scale = std::abs(mu) + 2.0 * std::abs(off);
    for (double a : diag) scale = std::max(scale, std::abs(a));
    double nudge = 4.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    bool hit_zero = false;
    long count = sturm_pass(diag, off, mu, hit_zero);
    double m = mu;
    for (int attempt = 0; hit_zero && attempt < 60; ++attempt) {
        m = mu + nudge;
        count = sturm_pass(diag, off, m, hit_zero);
        nudge *= 4.0;
    }
    if (hit_zero)
        throw std::runtime_error("sturm_count_leq: could not resolve zero pivot");
    return count;
}

// LDL^T solve of T x = rhs for symmetric tridiagonal T with constant
// off-diagonal. Requires positive definiteness; returns false if a pivot is
// not strictly positive.
inline bool ldlt_solve(std::span<const double> diag, double off, std::span<double> x) {
    const std::size_t n = diag.size();
    if (x.size() != n) return false;
    std::vector<double> d(n), l(n > 0 ? n - 1 : 0);
    double prev = diag[0];
    if (!(prev > 0.0)) return false;
    d[0] = prev;
    for (std::size_t i = 1; i < n; ++i) {
        l[i - 1] = off / d[i - 1];
        const double di = diag[i] - l[i - 1] * off;
        if (!(di > 0.0)) return false;
        d[i] = di;
    }
    for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= l[i] * x[i + 1];
    return true;
}

// Normwise backward error |r|_inf / (|T|_inf |x|_inf + |rhs|_inf). The raw
// ratio |r| / |rhs| sits at eps * |T| * |x| for any double-precision solve,
// which at 1/h^2 stiffness scales is far above the 1e-10 gate this library
// enforces; the backward error is the scale-free measure of solve quality.
inline double tridiag_residual(std::span<const double> diag, double off,
                               std::span<const double> x, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    double r_inf = 0.0, x_inf = 0.0, b_inf = 0.0, t_inf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = diag[i] * x[i] - rhs[i];
        if (i > 0) r += off * x[i - 1];
        if (i + 1 < n) r += off * x[i + 1];
        r_inf = std::max(r_inf, std::abs(r));
        x_inf = std::max(x_inf, std::abs(x[i]));
        b_inf = std::max(b_inf, std::abs(rhs[i]));
        t_inf = std::max(t_inf, std::abs(diag[i]) + 2.0 * std::abs(off));
    }
    const double den = t_inf * x_inf + b_inf;
    return den > 0.0 ? r_inf / den : r_inf;
}

} // namespace detail

/// Discretization of -Delta + V + M with the standard second-order stencil,
/// Dirichlet at +-L. In d = 1 the matrix is tridiagonal with constant
/// off-diagonal -1/h^2 and diagonal 2/h^2 + V(x_j) + M.
struct DiscreteOperator {
    const Grid* grid = nullptr;
    std::vector<double> diagonal;
    double off_diagonal = 0.0;
    double shift = 0.0; // M

    std::size_t size() const { return diagonal.size(); }
};

inline DiscreteOperator assemble(const PotentialField& V, double shift) {
    if (V.grid == nullptr || V.values.size() != V.grid->size())
        throw std::invalid_argument("assemble: potential field does not match its grid");
    const Grid& g = *V.grid;
    DiscreteOperator op;
    op.grid = &g;
    op.shift = shift;
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    op.off_diagonal = -inv_h2;
    op.diagonal.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        op.diagonal[i] = 2.0 * inv_h2 + V.values[i] + shift;
    return op;
}

/// Exact number of eigenvalues in (-inf, mu], by Sylvester inertia of the
/// LDL^T pivots of H - mu I.
inline long count_below(const DiscreteOperator& op, double mu) {
    return detail::sturm_count_leq(op.diagonal, op.off_diagonal, mu);
}

inline std::pair<double, double> gershgorin_bounds(const DiscreteOperator& op) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const double r0 = std::abs(op.off_diagonal);
    const std::size_t n = op.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i == 0 || i + 1 == n) && n > 1 ? r0 : 2.0 * r0;
        lo = std::min(lo, op.diagonal[i] - (n > 1 ? r : 0.0));
        hi = std::max(hi, op.diagonal[i] + (n > 1 ? r : 0.0));
    }
    return {lo, hi};
}

/// All eigenvalues <= mu, each localized to an interval of width <= tol by
/// bisection on the counting function. Multiplicities are respected.
inline std::vector<double> spectrum_below(const DiscreteOperator& op, double mu, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("spectrum_below: tolerance must be positive");
    const long k_total = count_below(op, mu);
    std::vector<double> eigs;
    eigs.reserve(static_cast<std::size_t>(std::max<long>(k_total, 0)));
    const auto [glo, ghi] = gershgorin_bounds(op);
    for (long k = 1; k <= k_total; ++k) {
        double lo = glo, hi = std::min(mu, ghi);
        for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break; // resolution floor
            if (count_below(op, mid) >= k)
                hi = mid;
            else
                lo = mid;
        }
        eigs.push_back(0.5 * (lo + hi));
    }
    return eigs;
}

enum class CurveProvenance { inertia, box_N, box_n, box_n_c, sublevel_volume_scaled, analytic };

inline const char* provenance_name(CurveProvenance p) {
    switch (p) {
    case CurveProvenance::inertia: return "inertia";
    case CurveProvenance::box_N: return "box-N";
    case CurveProvenance::box_n: return "box-n";
    case CurveProvenance::box_n_c: return "box-n_c";
    case CurveProvenance::sublevel_volume_scaled: return "sublevel-volume-scaled";
    case CurveProvenance::analytic: return "analytic";
    }
    return "?";
}

/// Counting data on a sorted mu grid. For genuine counting provenances the
/// curve is the right-continuous step function equal to count[i] on
/// [mu[i], mu[i+1]).
struct CountingCurve {
    std::vector<double> mu;
    std::vector<long> count;
    CurveProvenance provenance = CurveProvenance::inertia;

    void validate() const {
        if (mu.size() != count.size())
            throw std::invalid_argument("CountingCurve: size mismatch");
        for (std::size_t i = 1; i < mu.size(); ++i)
            if (!(mu[i] > mu[i - 1]))
                throw std::invalid_argument("CountingCurve: mu grid must be strictly increasing");
        for (long c : count)
            if (c < 0) throw std::invalid_argument("CountingCurve: negative count");
    }
};

inline CountingCurve counting_curve(const DiscreteOperator& op, std::span<const double> mu_grid) {
    CountingCurve c;
    c.provenance = CurveProvenance::inertia;
    c.mu.assign(mu_grid.begin(), mu_grid.end());
    std::sort(c.mu.begin(), c.mu.end());
    c.count.resize(c.mu.size());
    for (std::size_t i = 0; i < c.mu.size(); ++i) c.count[i] = count_below(op, c.mu[i]);
    c.validate();
    return c;
}

enum class MomentMode { eigenvalue_sum, layer_cake_integral };

/// Moment sum_{lambda_j < 0} |lambda_j|^gamma of the negative eigenvalues.
/// The layer-cake mode evaluates gamma * int_0^inf t^(gamma-1) N(-t) dt
/// exactly on the step counting function; for consistent inputs the two modes
/// agree to rounding.
inline double negative_moment(std::span<const double> eigenvalues, double gamma, MomentMode mode) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("negative_moment: gamma must be positive");
    std::vector<double> mags;
    mags.reserve(eigenvalues.size());
    for (double e : eigenvalues)
        if (e < 0.0) mags.push_back(-e);
    if (mode == MomentMode::eigenvalue_sum) {
        std::sort(mags.begin(), mags.end()); // ascending, stable summation
        double acc = 0.0;
        for (double m : mags) acc += std::pow(m, gamma);
        return acc;
    }
    std::sort(mags.begin(), mags.end());
    const std::size_t k = mags.size();
    double acc = 0.0, prev_pow = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double p = std::pow(mags[i], gamma);
        acc += static_cast<double>(k - i) * (p - prev_pow);
        prev_pow = p;
    }
    return acc;
}

/// Layer-cake integral evaluated on a counting curve. The curve must be a
/// genuine counting function (inertia or analytic provenance), start at count
/// zero below the spectrum, and its last negative-mu count persists to 0^-.
inline double negative_moment(const CountingCurve& curve, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("negative_moment: gamma must be positive");
    if (curve.provenance != CurveProvenance::inertia && curve.provenance != CurveProvenance::analytic)
        throw std::invalid_argument("negative_moment: curve provenance is not a counting function");
    curve.validate();
    double acc = 0.0;
    bool saw_negative = false;
    for (std::size_t i = 0; i < curve.mu.size(); ++i) {
        const double lo = curve.mu[i];
        if (lo >= 0.0) break;
        if (!saw_negative) {
            saw_negative = true;
            if (curve.count[i] != 0)
                throw std::invalid_argument("negative_moment: curve must bracket the spectrum from below");
        }
        const double hi = (i + 1 < curve.mu.size()) ? std::min(curve.mu[i + 1], 0.0) : 0.0;
        acc += static_cast<double>(curve.count[i]) *
               (std::pow(-lo, gamma) - std::pow(-hi, gamma));
    }
    return acc;
}

} // namespace torsion
