#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsion/landscape.hpp"
#include "torsion/potentials.hpp"
#include "torsion/spectral.hpp"

namespace torsion {

/// Ground-state lower bound min over the window of (1/u - M).
inline double groundstate_lower_bound(const LandscapeField& f) {
    const Grid& g = *f.grid;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = g.window_begin; i < g.window_end; ++i)
        best = std::min(best, 1.0 / f.u[i] - f.shift);
    return best;
}

struct IterationStep {
    int step = 0;
    double shift = 0.0;     // M_n
    double inf_inv_u = 0.0; // inf of 1/u_{M_n} over the window
    double max_u = 0.0;     // max of u_{M_n} over the window
};

struct IterationTrace {
    std::vector<IterationStep> steps;
    double final_shift = 0.0;         // last admissible or proposed M
    double groundstate_estimate = 0.0; // -final_shift
    bool converged = false;
    std::string stop_reason;
};

/// The fixed-point iteration M_{n+1} = M_n - inf(1/u_{M_n}). Each step
/// certifies admissibility by inertia before solving; a proposed shift at or
/// below -E0 of the discrete operator stops the run at the domain boundary,
/// which on coarse potentials (e.g. V = 0) is the normal exit. Convergence is
/// declared on the step size M_n - M_{n+1}.
inline IterationTrace iterate_M(const PotentialSpec& spec, const Grid& grid,
                                double m0, double tol, int max_steps) {
    if (!(tol > 0.0)) throw std::invalid_argument("iterate_M: tol must be positive");
    if (max_steps < 1) throw std::invalid_argument("iterate_M: max_steps must be >= 1");
    const PotentialField v = sample_potential(spec, grid);

    IterationTrace trace;
    double m = m0;
    for (int n = 0; n < max_steps; ++n) {
        DiscreteOperator op = assemble(v, m);
        const long bad = count_below(op, 0.0);
        if (bad > 0) {
            if (n == 0) throw IndefiniteOperatorError(bad);
            // the window inf can only overshoot -E0 when the global max of u
            // lies outside the window, so flag the stop instead of converging
            trace.final_shift = m;
            trace.groundstate_estimate = -m;
            trace.converged = false;
            trace.stop_reason = "reached the admissibility boundary; the window may not "
                                "contain the potential's influence region";
            return trace;
        }
        const LandscapeField u = solve_landscape(op);
        const double inf_inv_u = 1.0 / u.window_max_u();
        trace.steps.push_back({n, m, inf_inv_u, u.window_max_u()});
        const double next = m - inf_inv_u;
        if (!(next < m))
            throw std::runtime_error("iterate_M: non-monotone step at n = " + std::to_string(n) +
                                     ", M = " + std::to_string(m) +
                                     ", inf(1/u) = " + std::to_string(inf_inv_u));
        trace.final_shift = next;
        trace.groundstate_estimate = -next;
        if (m - next < tol) {
            trace.converged = true;
            trace.stop_reason = "step size below tolerance";
            return trace;
        }
        m = next;
    }
    trace.converged = false;
    trace.stop_reason = "max_steps reached";
    return trace;
}

} // namespace torsion
