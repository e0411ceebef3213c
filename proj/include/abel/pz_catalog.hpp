#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "abel/errors.hpp"
#include "abel/special.hpp"

namespace abel {

// Parametric reference solutions of y y' - y = Q(x) from the
// Polyanin-Zaytsev catalog, as printed (including the original rational form
// whose typo status the harness measures rather than assumes):
//
//   rational-137-original   u = tau - Ln(1+tau) - C
//   rational-137-modified   u = tau + Ln(1+tau) - C
//       x = sqrt(2A) sqrt(u)/tau
//       y = sqrt(2A) [ (1+tau)/tau sqrt(u) - tau/(2 sqrt(u)) ]
//       matching Q: A/x + A^2/x^3            (entry 1.3.1.7)
//
//   bessel-13133            U1 = tau/2 [I_{-2/3} + I_{4/3}] + I_{1/3}/3
//                           U2 = U1^2 + tau^2 I_{1/3}^2
//                           U3 = 2/3 tau^2 I_{1/3}^2 - 2 U1 U2
//       x = -2 cbrt(A/36 tau^{4/3} U2^{-1} I_{1/3}^2)
//       y = -3 cbrt(A/36 tau^{-2/3} U2^{-1} U3 I_{1/3}^{-1})
//       matching Q: A/x^2                    (entry 1.3.1.33)
//
//   exponential-1319        x = A Ln| (tau^2+1)/tau (arctan tau - C) |
//                           y = A/tau [tau + (tau^2+1)(arctan tau - C)]
//       matching Q: A (e^{2x/A} - 1)         (entry 1.3.1.9)
//
// Cube roots are real and sign-preserving, matching the printed negative
// prefactors.

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

struct ParametricCurve {
    enum class Kind { rational_original, rational_modified, bessel, exponential };

    std::string id;
    Kind kind = Kind::rational_modified;
    double a = 1.0;  // catalog parameter A
    double c = 0.0;  // integration constant C (unused by the Bessel entry)

    // tau domain for residual grids, and the sub-domain where x(tau) is
    // strictly monotone (used to treat y as a function of x).
    double tau_lo = 0.05;
    double tau_hi = 10.0;
    double monotone_tau_lo = 0.05;
    double monotone_tau_hi = 10.0;
    bool geometric_grid = true;
    int grid_points = 200;

    // Sign of the Ln(1+tau) term for the rational pair; the structural tests
    // zero it to confirm the two printings differ only there.
    int ln_sign = 1;

    // The inhomogeneity this catalog entry is associated with.
    double q(double x) const {
        switch (kind) {
            case Kind::rational_original:
            case Kind::rational_modified: return a / x + a * a / (x * x * x);
            case Kind::bessel: return a / (x * x);
            case Kind::exponential: return a * (std::exp(2.0 * x / a) - 1.0);
        }
        return 0.0;
    }
};

inline std::vector<ParametricCurve> pz_catalog(double a = 1.0, double c = 0.0) {
    std::vector<ParametricCurve> entries(4);
    entries[0].id = "rational-137-original";
    entries[0].kind = ParametricCurve::Kind::rational_original;
    entries[0].ln_sign = -1;
    entries[1].id = "rational-137-modified";
    entries[1].kind = ParametricCurve::Kind::rational_modified;
    entries[1].ln_sign = 1;
    entries[2].id = "bessel-13133";
    entries[2].kind = ParametricCurve::Kind::bessel;
    entries[2].tau_lo = 0.05;
    entries[2].tau_hi = 10.0;
    entries[2].monotone_tau_lo = 0.02;  // x(tau) turns around near tau ~ 0.77
    entries[2].monotone_tau_hi = 0.70;
    entries[3].id = "exponential-1319";
    entries[3].kind = ParametricCurve::Kind::exponential;
    entries[3].tau_lo = 0.1;
    entries[3].tau_hi = 5.0;
    entries[3].monotone_tau_lo = 0.1;
    entries[3].monotone_tau_hi = 5.0;
    entries[3].geometric_grid = false;
    for (auto& e : entries) {
        e.a = a;
        e.c = c;
    }
    return entries;
}

inline std::optional<ParametricCurve> pz_entry(std::string_view id, double a = 1.0,
                                               double c = 0.0) {
    for (auto& e : pz_catalog(a, c))
        if (e.id == id) return e;
    return std::nullopt;
}

inline CurvePoint eval_curve(const ParametricCurve& curve, double tau) {
    const double a = curve.a;
    switch (curve.kind) {
        case ParametricCurve::Kind::rational_original:
        case ParametricCurve::Kind::rational_modified: {
            if (tau <= -1.0) throw DomainError("rational curve: Ln(1+tau) needs tau > -1");
            if (tau == 0.0) throw DomainError("rational curve: tau = 0");
            const double u = tau + curve.ln_sign * std::log1p(tau) - curve.c;
            if (u <= 0.0) throw DomainError("rational curve: non-positive radicand");
            const double root = std::sqrt(u);
            const double scale = std::sqrt(2.0 * a);
            return {scale * root / tau,
                    scale * ((1.0 + tau) / tau * root - tau / (2.0 * root))};
        }
        case ParametricCurve::Kind::bessel: {
            if (tau <= 0.0) throw DomainError("bessel curve: tau must be positive");
            const double i13 = modified_bessel_first_kind(1.0 / 3.0, tau);
            const double u1 = tau / 2.0 *
                                  (modified_bessel_first_kind(-2.0 / 3.0, tau) +
                                   modified_bessel_first_kind(4.0 / 3.0, tau)) +
                              i13 / 3.0;
            const double u2 = u1 * u1 + tau * tau * i13 * i13;
            const double u3 = 2.0 / 3.0 * tau * tau * i13 * i13 - 2.0 * u1 * u2;
            const double x = -2.0 * std::cbrt(a / 36.0 * std::pow(tau, 4.0 / 3.0) / u2 * i13 * i13);
            const double y =
                -3.0 * std::cbrt(a / 36.0 * std::pow(tau, -2.0 / 3.0) / u2 * u3 / i13);
            return {x, y};
        }
        case ParametricCurve::Kind::exponential: {
            if (tau == 0.0) throw DomainError("exponential curve: tau = 0");
            const double w = (tau * tau + 1.0) / tau * (std::atan(tau) - curve.c);
            if (w == 0.0) throw DomainError("exponential curve: Ln argument vanishes");
            return {a * std::log(std::abs(w)),
                    a / tau * (tau + (tau * tau + 1.0) * (std::atan(tau) - curve.c))};
        }
    }
    throw Error("unknown catalog entry");
}

inline std::vector<double> default_tau_grid(const ParametricCurve& curve) {
    std::vector<double> grid(curve.grid_points);
    const int n = curve.grid_points;
    if (curve.geometric_grid) {
        // geometric spacing on (tau_lo, tau_hi]
        const double ratio = curve.tau_hi / curve.tau_lo;
        for (int i = 0; i < n; ++i)
            grid[i] = curve.tau_lo * std::pow(ratio, static_cast<double>(i + 1) / n);
    } else {
        for (int i = 0; i < n; ++i)
            grid[i] = curve.tau_lo + (curve.tau_hi - curve.tau_lo) * i / (n - 1.0);
    }
    return grid;
}

// Max |y y' - y - Q(x)| along the curve; y' = (dy/dtau)/(dx/dtau) by central
// finite differences with a small local step.
inline double curve_residual(const ParametricCurve& curve, const std::vector<double>& tau_grid) {
    if (tau_grid.empty()) throw PreconditionError("curve_residual: empty grid");
    double worst = 0.0;
    for (const double tau : tau_grid) {
        const double delta = 1e-5 * std::max(1.0, std::abs(tau));
        const CurvePoint plus = eval_curve(curve, tau + delta);
        const CurvePoint minus = eval_curve(curve, tau - delta);
        const double dx = (plus.x - minus.x) / (2.0 * delta);
        const double dy = (plus.y - minus.y) / (2.0 * delta);
        if (std::abs(dx) < 1e-9) throw TurningPointError(tau);
        const CurvePoint p = eval_curve(curve, tau);
        worst = std::max(worst, std::abs(p.y * (dy / dx) - p.y - curve.q(p.x)));
    }
    return worst;
}

}  // namespace abel
