#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace torsion {

/// Ground state energy of -d^2/dx^2 - eps * 1_{(-delta, delta)} on the line.
/// E0 = x* - eps where x* is the smallest positive root of
/// F(x) = x (1 + tan^2(sqrt(x) delta)) = eps; F is strictly increasing on
/// (0, (pi/2delta)^2), so plain bisection localizes the root to near machine
/// precision.
inline double squarewell_E0(double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("squarewell_E0: eps and delta must be positive");
    const double theta2 = (M_PI / (2.0 * delta)) * (M_PI / (2.0 * delta));
    auto F = [delta](double x) {
        const double t = std::tan(std::sqrt(x) * delta);
        return x * (1.0 + t * t);
    };
    double lo = 0.0;
    double hi = std::min(eps, theta2 * (1.0 - 1e-15));
    // F(hi) >= eps by monotonicity when hi = eps; guard the theta2 branch
    while (F(hi) < eps) hi = 0.5 * (hi + theta2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (F(mid) < eps ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) - eps;
}

/// Closed-form landscape function of the 1d square well, all three shift
/// regimes. Inside |x| < delta the solution is built on cosh (M > eps),
/// a parabola (M = eps) or cos (M < eps); outside it decays as exp(-sqrt(M)|x|).
/// Coefficients follow from C^1 matching at |x| = delta.
struct SquareWellClosedForm {
    double eps = 0.0;
    double delta = 0.0;
    double shift = 0.0; // M
    int regime = 0;     // +1: M > eps, 0: M == eps, -1: M < eps
    double inside_coeff = 0.0;  // a2 (cosh), A (parabola apex) or a (cos)
    double outside_coeff = 0.0; // b1 resp. b

    double operator()(double x) const {
        const double r = std::abs(x);
        const double M = shift;
        if (r > delta) return 1.0 / M + outside_coeff * std::exp(-std::sqrt(M) * r);
        switch (regime) {
        case +1: return 1.0 / (M - eps) + inside_coeff * std::cosh(std::sqrt(M - eps) * r);
        case 0: return inside_coeff - 0.5 * r * r;
        default: return 1.0 / (M - eps) + inside_coeff * std::cos(std::sqrt(eps - M) * r);
        }
    }
};

inline SquareWellClosedForm squarewell_landscape(double eps, double delta, double M) {
    const double e0 = squarewell_E0(eps, delta);
    if (!(M > -e0))
        throw std::domain_error("squarewell_landscape: shift M = " + std::to_string(M) +
                                " is not above -E0 = " + std::to_string(-e0) +
                                "; the landscape coefficients blow up");
    SquareWellClosedForm f;
    f.eps = eps;
    f.delta = delta;
    f.shift = M;
    const double sM = std::sqrt(M);
    const double tol = 1e-9 * std::max(M, eps);
    if (std::abs(M - eps) <= tol) {
        f.regime = 0;
        f.inside_coeff = 1.0 / M + delta / sM + 0.5 * delta * delta; // u(0)
        f.outside_coeff = delta / sM * std::exp(sM * delta);
    } else if (M > eps) {
        f.regime = +1;
        const double k = std::sqrt(M - eps);
        const double a2 = (1.0 / M - 1.0 / (M - eps)) /
                          (std::cosh(k * delta) + k / sM * std::sinh(k * delta));
        f.inside_coeff = a2;
        f.outside_coeff = -(k / sM) * std::sinh(k * delta) * std::exp(sM * delta) * a2;
    } else {
        f.regime = -1;
        const double k = std::sqrt(eps - M);
        const double a = (1.0 / M - 1.0 / (M - eps)) /
                         (std::cos(k * delta) - k / sM * std::sin(k * delta));
        f.inside_coeff = a;
        f.outside_coeff = (k / sM) * std::sin(k * delta) * std::exp(sM * delta) * a;
    }
    return f;
}

inline double squarewell_u(double eps, double delta, double M, double x) {
    return squarewell_landscape(eps, delta, M)(x);
}

/// inf over the line of 1/u_M - M. The landscape peaks at the origin in every
/// regime, so the infimum is 1/u(0) - M; the M = eps case reduces to the
/// rational expression in (eps, delta) used directly here. The M < eps branch
/// has no published display; it is still the same evaluation at x = 0.
inline double squarewell_inf_effective(double eps, double delta, double M) {
    if (std::abs(M - eps) <= 1e-9 * std::max(M, eps)) {
        const double se = std::sqrt(eps);
        const double num = -delta * eps * se - 0.5 * delta * delta * eps * eps;
        const double den = 1.0 + delta * se + 0.5 * delta * delta * eps;
        return num / den;
    }
    const SquareWellClosedForm f = squarewell_landscape(eps, delta, M);
    return 1.0 / f(0.0) - M;
}

/// Bound-state levels of -Delta - 1/|x| in the hbar = 2m = 1 convention:
/// E_n = -1/(4 n^2) with degeneracy n^2.
inline double hydrogen_level(int n) {
    if (n < 1) throw std::invalid_argument("hydrogen_level: n must be >= 1");
    return -1.0 / (4.0 * n * n);
}

/// Counting function of the hydrogen spectrum at mu < 0 with the
/// (-inf, mu] convention: sum of n^2 over levels -1/(4n^2) <= mu.
inline long hydrogen_count(double mu) {
    if (!(mu < 0.0)) throw std::invalid_argument("hydrogen_count: mu must be negative");
    const double nf = 0.5 / std::sqrt(-mu);
    const long n = static_cast<long>(std::floor(nf * (1.0 + 1e-12) + 1e-12));
    return n * (n + 1) * (2 * n + 1) / 6;
}

} // namespace torsion
