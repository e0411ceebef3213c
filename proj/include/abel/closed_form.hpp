#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "abel/errors.hpp"
#include "abel/problem.hpp"
#include "abel/quadrature.hpp"
#include "abel/special.hpp"

namespace abel {

// Candidate closed-form solution of y y' - y = Q(x):
//
//   y(x) = 1/2 (x + phi) [beta Z(x) + 1/3]
//
// where Z solves the depressed cubic Z^3 + p Z + q = 0 assembled from the
// coefficient c(x) below, phi is fixed by the initial condition, and beta is
// the order-effect factor of the inhomogeneity. The construction's fixed
// constants are h(x) = (x + phi)/2, lambda = 2, k = h^2.

enum class RootBranch { automatic, z1, z2, z3 };

inline const char* to_string(RootBranch b) {
    switch (b) {
        case RootBranch::automatic: return "auto";
        case RootBranch::z1: return "z1";
        case RootBranch::z2: return "z2";
        case RootBranch::z3: return "z3";
    }
    return "?";
}

inline std::optional<RootBranch> branch_from_string(std::string_view s) {
    if (s == "auto" || s == "automatic") return RootBranch::automatic;
    if (s == "z1" || s == "Z1") return RootBranch::z1;
    if (s == "z2" || s == "Z2") return RootBranch::z2;
    if (s == "z3" || s == "Z3") return RootBranch::z3;
    return std::nullopt;
}

struct ClosedFormParams {
    double phi = 0.0;
    double beta = 1.0;                  // order-effect factor, in (0, 1]
    RootBranch branch = RootBranch::automatic;
    double epsilon = 1e-3;              // exclusion radius around x = 0
    SpecialFunctionConfig special;

    void validate() const {
        if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
        if (!(beta > 0)) throw PreconditionError("beta must be positive");
        if (!std::isfinite(phi)) throw PreconditionError("phi must be finite");
    }
};

// psi(x) = sgn(x) |x| Si(x); even, positive away from the origin.
inline double compute_psi(double x, double epsilon = 1e-3, const SpecialFunctionConfig& cfg = {}) {
    if (std::abs(x) < epsilon) throw ExclusionZoneError(x, epsilon);
    return sign(x) * std::abs(x) * sine_integral(x, cfg);
}

// Coefficient c of the cubic, evaluated exactly as printed:
//   c = { 0.5 psi sin 2x - [2 + 1/(sgn(x)|x|)] psi sin^2 x
//         + 2 psi^2 [cos x - sin x/(sgn(x)|x|)] - sin^3 x } / (-2 psi^3)
// Valid for the whole axis except x = 0 (guarded by the exclusion radius).
inline double coefficient_c(double x, double epsilon = 1e-3,
                            const SpecialFunctionConfig& cfg = {}) {
    if (std::abs(x) < epsilon) throw ExclusionZoneError(x, epsilon);
    const double sgn_abs = sign(x) * std::abs(x);
    const double psi = sgn_abs * sine_integral(x, cfg);
    const double s = std::sin(x);
    const double numerator = 0.5 * psi * std::sin(2.0 * x) -
                             (2.0 + 1.0 / sgn_abs) * psi * s * s +
                             2.0 * psi * psi * (std::cos(x) - s / sgn_abs) - s * s * s;
    return numerator / (-2.0 * psi * psi * psi);
}

// Order-effect factor beta for Q(x) = [f(x)]^n by base-function kind.
inline double beta_factor(const InhomogeneityClass& cls) {
    const auto row = [](BaseKind kind, double n) -> double {
        switch (kind) {
            case BaseKind::polynomial_x: return -0.252 * std::log(n) + 0.991;
            case BaseKind::logarithm: return -0.0053 * n * n + 0.0425 * n + 0.981;
            case BaseKind::exponential: return -0.12 * std::log(n) + 0.3218;
            case BaseKind::trigonometric: return 1.0;
            default: return 1.0;  // mixed: no table row, neutral factor
        }
    };
    if (cls.kind == BaseKind::rational) {
        const int n = cls.m - cls.k;
        return n >= 2 ? row(cls.rational_base, static_cast<double>(n)) : 1.0;
    }
    return row(cls.kind, static_cast<double>(cls.order));
}

// ---------------------------------------------------------------------------
// Cubic assembly and Cardano roots
// ---------------------------------------------------------------------------

struct CubicCoefficients {
    double a = -4.0;
    double b = 0.0;
    double c = 0.0;
    double p = 0.0;
    double q = 0.0;
    double d = 0.0;  // discriminant (p/3)^3 + (q/2)^2
};

enum class CubicCase { three_real, one_real, repeated };

inline const char* to_string(CubicCase c) {
    switch (c) {
        case CubicCase::three_real: return "three-real";
        case CubicCase::one_real: return "one-real";
        case CubicCase::repeated: return "repeated";
    }
    return "?";
}

// Real roots of Z^3 + pZ + q = 0 with the case tag. For the one-real case the
// conjugate pair is reported as metadata, not as roots.
struct CardanoRoots {
    CubicCase tag = CubicCase::one_real;
    int count = 0;
    std::array<double, 3> z{};  // paper labels Z1[, Z2[, Z3]]
    double conjugate_re = 0.0;
    double conjugate_im = 0.0;
};

inline CardanoRoots solve_cardano(double p, double q) {
    CardanoRoots out;
    const double p3 = p / 3.0;
    const double q2 = q / 2.0;
    const double d = p3 * p3 * p3 + q2 * q2;
    const double d_tol = 1e-12 * std::max({1.0, p3 * p3, q2 * q2});

    if (std::abs(d) < d_tol) {
        // repeated roots: 2 cbrt(-q/2) and the double root -cbrt(-q/2)
        const double r = std::cbrt(-q2);
        out.tag = CubicCase::repeated;
        out.count = 2;
        out.z[0] = 2.0 * r;
        out.z[1] = -r;
        return out;
    }
    if (d < 0.0) {
        // three distinct real roots; d < 0 forces p < 0
        const double radius = std::sqrt(-p3);
        const double angle = std::acos(std::clamp(-q2 / std::sqrt(-p3 * p3 * p3), -1.0, 1.0));
        out.tag = CubicCase::three_real;
        out.count = 3;
        out.z[0] = 2.0 * radius * std::cos(angle / 3.0);
        out.z[1] = -2.0 * radius * std::cos((angle - std::numbers::pi) / 3.0);
        out.z[2] = -2.0 * radius * std::cos((angle + std::numbers::pi) / 3.0);
        return out;
    }
    const double sd = std::sqrt(d);
    const double u = std::cbrt(-q2 + sd);
    const double v = std::cbrt(-q2 - sd);
    out.tag = CubicCase::one_real;
    out.count = 1;
    out.z[0] = u + v;
    out.conjugate_re = -0.5 * (u + v);
    out.conjugate_im = std::sqrt(3.0) / 2.0 * (u - v);
    return out;
}

// Depressed-cubic reduction of Z^3 + aZ^2 + bZ + c with the fixed a = -4:
// p = -a^2/3 + b, q = 2(a/3)^3 - ab/3 + c.
inline CubicCoefficients assemble_cubic(double b, double c) {
    CubicCoefficients co;
    co.b = b;
    co.c = c;
    co.p = -co.a * co.a / 3.0 + b;
    co.q = 2.0 * std::pow(co.a / 3.0, 3) - co.a * b / 3.0 + c;
    const double p3 = co.p / 3.0, q2 = co.q / 2.0;
    co.d = p3 * p3 * p3 + q2 * q2;
    return co;
}

// Cubic coefficients at x: b = 3 - c(x) - 4Q(x)/(x + phi).
inline CubicCoefficients cubic_at(double x, double q_at_x, double phi, double epsilon = 1e-3,
                                  const SpecialFunctionConfig& cfg = {}) {
    if (std::abs(x) < epsilon) throw ExclusionZoneError(x, epsilon);
    if (x + phi == 0.0) throw PoleError(x);
    const double c = coefficient_c(x, epsilon, cfg);
    const double b = 3.0 - c - 4.0 * q_at_x / (x + phi);
    if (!std::isfinite(b)) throw PoleError(x);
    return assemble_cubic(b, c);
}

inline CardanoRoots cardano_roots_at(double x, const CanonicalProblem& problem,
                                     const ClosedFormParams& params) {
    const CubicCoefficients co =
        cubic_at(x, problem.q(x), params.phi, params.epsilon, params.special);
    return solve_cardano(co.p, co.q);
}

// y(x) = 1/2 (x + phi)(beta Z + 1/3); affine in Z.
inline double evaluate_solution(double x, double z, const ClosedFormParams& params) {
    return 0.5 * (x + params.phi) * (params.beta * z + 1.0 / 3.0);
}

namespace detail {

// Root selected by a pinned branch label; falls back to the only real root
// when the requested case-1 branch does not exist at this x.
inline double pick_pinned(const CardanoRoots& roots, RootBranch branch) {
    switch (branch) {
        case RootBranch::z1: return roots.z[0];
        case RootBranch::z2: return roots.count >= 2 ? roots.z[1] : roots.z[0];
        case RootBranch::z3:
            if (roots.tag == CubicCase::three_real) return roots.z[2];
            return roots.count >= 2 ? roots.z[1] : roots.z[0];  // double root is Z2 = Z3
        default: return roots.z[0];
    }
}

inline double nearest_root(const CardanoRoots& roots, double ref) {
    double best = roots.z[0];
    for (int i = 1; i < roots.count; ++i)
        if (std::abs(roots.z[i] - ref) < std::abs(best - ref)) best = roots.z[i];
    return best;
}

// Branch choice by minimum ODE residual |y y' - y - Q| with a finite-difference
// y' obtained by nearest-root continuation at x +- delta.
inline int auto_branch_index(double x, const CanonicalProblem& problem,
                             const ClosedFormParams& params, const CardanoRoots& roots) {
    if (roots.count == 1) return 0;
    double delta = 1e-5 * std::max(1.0, std::abs(x));
    const double room_origin = 0.5 * (std::abs(x) - params.epsilon);
    const double room_pole = 0.5 * std::abs(x + params.phi);
    if (room_origin > 0.0) delta = std::min(delta, room_origin);
    if (room_pole > 0.0) delta = std::min(delta, room_pole);
    if (!(delta > 0.0)) return 0;

    int best = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < roots.count; ++i) {
        double residual;
        try {
            const double z0 = roots.z[i];
            const double zp = nearest_root(cardano_roots_at(x + delta, problem, params), z0);
            const double zm = nearest_root(cardano_roots_at(x - delta, problem, params), z0);
            const double y0 = evaluate_solution(x, z0, params);
            const double dy = (evaluate_solution(x + delta, zp, params) -
                               evaluate_solution(x - delta, zm, params)) /
                              (2.0 * delta);
            residual = std::abs(y0 * dy - y0 - problem.q(x));
        } catch (const Error&) {
            continue;
        }
        if (residual < best_residual) {
            best_residual = residual;
            best = i;
        }
    }
    return best;
}

}  // namespace detail

// Root of the assembled cubic at x, selected by the branch policy.
inline double solve_z(double x, const CanonicalProblem& problem, const ClosedFormParams& params) {
    const CardanoRoots roots = cardano_roots_at(x, problem, params);
    if (params.branch == RootBranch::automatic)
        return roots.z[detail::auto_branch_index(x, problem, params, roots)];
    return detail::pick_pinned(roots, params.branch);
}

// Closed-form candidate value y(x) for the configured parameters.
inline double closed_form_value(double x, const CanonicalProblem& problem,
                                const ClosedFormParams& params) {
    return evaluate_solution(x, solve_z(x, problem, params), params);
}

// ---------------------------------------------------------------------------
// phi fitting
// ---------------------------------------------------------------------------

struct PhiSearchOptions {
    double lo = -1e3;
    double hi = 1e3;
    int points = 10000;       // scan resolution for sign changes
    double residual = 1e-10;  // acceptance threshold on |y(x0) - y0|
};

// Scalar root-find for the integration constant: returns phi such that the
// branch-selected closed-form value matches the initial condition to the
// configured residual. Z depends on phi through the cubic coefficient b, so
// this brackets sign changes of y(x0; phi) - y0 and bisects each candidate,
// discarding brackets that converge onto branch discontinuities.
inline double fit_phi(const CanonicalProblem& problem, const ClosedFormParams& params_sans_phi,
                      double x0, double y0, const PhiSearchOptions& search = {}) {
    if (std::abs(x0) < params_sans_phi.epsilon) throw ExclusionZoneError(x0, params_sans_phi.epsilon);
    if (search.points < 2) throw PreconditionError("phi search needs at least 2 points");

    ClosedFormParams params = params_sans_phi;
    const auto eval = [&](double phi) -> std::optional<double> {
        params.phi = phi;
        try {
            return closed_form_value(x0, problem, params) - y0;
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    const double step = (search.hi - search.lo) / (search.points - 1);
    std::optional<double> prev_f;
    double prev_phi = 0.0;
    for (int i = 0; i < search.points; ++i) {
        const double phi = search.lo + i * step;
        const auto f = eval(phi);
        if (f && prev_f && *prev_f * *f <= 0.0) {
            double a = prev_phi, b = phi, fa = *prev_f;
            for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++iter) {
                const double mid = 0.5 * (a + b);
                const auto fm = eval(mid);
                if (!fm) break;
                if (fa * *fm <= 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = *fm;
                }
            }
            const double candidate = 0.5 * (a + b);
            const auto fc = eval(candidate);
            if (fc && std::abs(*fc) < search.residual) return candidate;
            // otherwise the bracket closed on a branch jump; keep scanning
        }
        if (f) {
            prev_f = f;
            prev_phi = phi;
        }
    }
    throw NoBracketError("no phi with y(x0) = y0 found in [" + std::to_string(search.lo) + ", " +
                         std::to_string(search.hi) + "]");
}

// ---------------------------------------------------------------------------
// Riccati general-solution diagnostic (Eq. 46 shape)
// ---------------------------------------------------------------------------

// omega_g(x) = sin x / (2 sgn(x)|x| Si(x)) + sgn(x)Si(x) / (C3 - int_0^x sgn Si)
// The second term is the correction tau(x), expected to vanish for large |x|.
inline double riccati_omega(double x, double c3, double epsilon = 1e-3,
                            const SpecialFunctionConfig& cfg = {}) {
    if (std::abs(x) < epsilon) throw ExclusionZoneError(x, epsilon);
    const double si = sine_integral(x, cfg);
    const double particular = std::sin(x) / (2.0 * sign(x) * std::abs(x) * si);
    const double accumulated =
        integrate([&cfg](double t) { return sign(t) * sine_integral(t, cfg); }, 0.0, x);
    const double denom = c3 - accumulated;
    if (std::abs(denom) < 1e-12 * std::max({1.0, std::abs(c3), std::abs(accumulated)}))
        throw SingularDenominatorError("riccati_omega: C3 coincides with the accumulated integral");
    return particular + sign(x) * si / denom;
}

}  // namespace abel
