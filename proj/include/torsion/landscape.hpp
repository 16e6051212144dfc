#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsion/grid.hpp"
#include "torsion/spectral.hpp"

namespace torsion {

/// Samples of the landscape function u solving (-Delta + V + M) u = 1 on the
/// truncated grid. Positivity of every node value is a hard invariant: the
/// discrete operator is an irreducible M-matrix for admissible M, so its
/// inverse is positivity-preserving and any nonpositive node marks a solver
/// failure.
struct LandscapeField {
    const Grid* grid = nullptr;
    std::vector<double> u;
    double shift = 0.0; // M
    double residual = 0.0;

    double window_max_u() const {
        double m = 0.0;
        for (std::size_t i = grid->window_begin; i < grid->window_end; ++i)
            m = std::max(m, u[i]);
        return m;
    }
    double window_min_u() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = grid->window_begin; i < grid->window_end; ++i)
            m = std::min(m, u[i]);
        return m;
    }
};

class IndefiniteOperatorError : public std::runtime_error {
public:
    long eigenvalues_at_or_below_zero;
    explicit IndefiniteOperatorError(long count)
        : std::runtime_error("operator is not positive definite: inertia reports " +
                             std::to_string(count) + " eigenvalue(s) <= 0; the shift M "
                             "must exceed -E0 on this grid"),
          eigenvalues_at_or_below_zero(count) {}
};

inline LandscapeField solve_landscape(const DiscreteOperator& op) {
    const long bad = count_below(op, 0.0);
    if (bad > 0) throw IndefiniteOperatorError(bad);

    LandscapeField f;
    f.grid = op.grid;
    f.shift = op.shift;
    f.u.assign(op.size(), 1.0);
    if (!detail::ldlt_solve(op.diagonal, op.off_diagonal, f.u))
        throw std::runtime_error("solve_landscape: LDL^T factorization failed on a "
                                 "positive definite operator");
    std::vector<double> ones(op.size(), 1.0);
    f.residual = detail::tridiag_residual(op.diagonal, op.off_diagonal, f.u, ones);
    if (f.residual > 1e-10)
        throw std::runtime_error("solve_landscape: relative residual " +
                                 std::to_string(f.residual) + " exceeds 1e-10");
    for (double v : f.u)
        if (!(v > 0.0))
            throw std::runtime_error("solve_landscape: positivity violated at a node; "
                                     "solver failure");
    return f;
}

/// Effective potential W = 1/u - M per node.
inline std::vector<double> effective_potential(const LandscapeField& f) {
    std::vector<double> w(f.u.size());
    for (std::size_t i = 0; i < f.u.size(); ++i) {
        if (!(f.u[i] > 0.0))
            throw std::domain_error("effective_potential: nonpositive u node");
        w[i] = 1.0 / f.u[i] - f.shift;
    }
    return w;
}

struct HarnackBox {
    double scale = 0.0;
    double lo = 0.0;
};

enum class CtildeQualifier {
    strict,          // boxes obeying the deep-sublevel threshold existed
    global_fallback, // no deep box exists; min ratio over all negative boxes
    absent           // effective potential never negative on a whole box
};

/// Measured Harnack data of a landscape field.
///   c_hm:    max over boxes/scales of sup_Q u / (inf_Q u + l^2), clipped at 1
///   a_m:     sup u / inf u over the window
///   c_tilde: sharpest constant with sup_Q W <= c_tilde * inf_Q W on the
///            qualifying boxes (W < 0 there); qualifying means
///            sup_Q W <= -c / (C_c l^2). When that set is empty the value,
///            if present, is the conservative min ratio over all boxes with
///            sup_Q W < 0, flagged as global_fallback.
struct HarnackDiagnostics {
    double c_hm = 1.0;
    HarnackBox c_hm_box;
    double a_m = 1.0;
    std::optional<double> c_tilde;
    CtildeQualifier c_tilde_qualifier = CtildeQualifier::absent;
    HarnackBox c_tilde_box;
    double c_parameter = 2.0; // the c of the deep-box threshold
    double c_c = 0.0;         // C_c = (c-1) / (2^d (5 A_M)^2)
    std::vector<double> scales;
};

inline std::vector<double> dyadic_scales(const Grid& g) {
    std::vector<double> s;
    for (double l = g.spacing; l <= 2.0 * g.window * (1.0 + 1e-12); l *= 2.0)
        s.push_back(l);
    return s;
}

inline HarnackDiagnostics harnack_constants(const LandscapeField& f,
                                            std::vector<double> scales = {},
                                            double c = 2.0) {
    if (!(c > 1.0)) throw std::invalid_argument("harnack_constants: c must exceed 1");
    const Grid& g = *f.grid;
    if (scales.empty()) scales = dyadic_scales(g);
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12 * a; }),
                 scales.end());
    for (double l : scales)
        if (l < g.spacing * (1.0 - 1e-12) || l > 2.0 * g.window * (1.0 + 1e-12))
            throw std::invalid_argument("harnack_constants: scale outside [h, 2W]");

    HarnackDiagnostics d;
    d.scales = scales;
    d.c_parameter = c;
    d.a_m = f.window_max_u() / f.window_min_u();
    d.c_c = (c - 1.0) / (std::pow(2.0, g.dimension) * 25.0 * d.a_m * d.a_m);

    const std::vector<double> w = effective_potential(f);

    double best_ratio = 0.0;
    double strict_min = std::numeric_limits<double>::infinity();
    HarnackBox strict_box;
    double fallback_min = std::numeric_limits<double>::infinity();
    HarnackBox fallback_box;

    for (double l : scales) {
        const BoxPartition part = box_partition(g, l);
        const double threshold = c / (d.c_c * l * l);
        for (const BoxCell& cell : part.cells) {
            double umin = std::numeric_limits<double>::infinity(), umax = 0.0;
            double wmin = umin, wmax = -umin;
            for (std::size_t i = cell.first_node; i < cell.first_node + cell.node_count; ++i) {
                umin = std::min(umin, f.u[i]);
                umax = std::max(umax, f.u[i]);
                wmin = std::min(wmin, w[i]);
                wmax = std::max(wmax, w[i]);
            }
            const double ratio = umax / (umin + l * l);
            if (ratio > best_ratio) {
                best_ratio = ratio;
                d.c_hm_box = {l, cell.lo};
            }
            if (wmax < 0.0) {
                const double wr = wmax / wmin; // in (0, 1]
                if (wr < fallback_min) {
                    fallback_min = wr;
                    fallback_box = {l, cell.lo};
                }
                if (wmax <= -threshold && wr < strict_min) {
                    strict_min = wr;
                    strict_box = {l, cell.lo};
                }
            }
        }
    }
    d.c_hm = std::max(1.0, best_ratio);
    if (std::isfinite(strict_min)) {
        d.c_tilde = strict_min;
        d.c_tilde_qualifier = CtildeQualifier::strict;
        d.c_tilde_box = strict_box;
    } else if (std::isfinite(fallback_min)) {
        d.c_tilde = fallback_min;
        d.c_tilde_qualifier = CtildeQualifier::global_fallback;
        d.c_tilde_box = fallback_box;
    } else {
        d.c_tilde_qualifier = CtildeQualifier::absent;
    }
    return d;
}

} // namespace torsion
