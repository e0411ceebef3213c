#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abel/errors.hpp"
#include "abel/expr.hpp"
#include "abel/quadrature.hpp"

namespace abel {

// General Abel equation of the second kind:
//   [g1(x) U + g0(x)] U' = f2(x) U^2 + f1(x) U + f0(x)
struct GeneralCoefficients {
    Expression g1, g0, f2, f1, f0;
    Bindings constants;

    double g1v(double x) const { return g1.evaluate(x, constants); }
    double g0v(double x) const { return g0.evaluate(x, constants); }
    double f2v(double x) const { return f2.evaluate(x, constants); }
    double f1v(double x) const { return f1.evaluate(x, constants); }
    double f0v(double x) const { return f0.evaluate(x, constants); }

    static GeneralCoefficients parse(const std::string& g1_text, const std::string& g0_text,
                                     const std::string& f2_text, const std::string& f1_text,
                                     const std::string& f0_text, Bindings constants = {}) {
        GeneralCoefficients c;
        c.g1 = Expression::parse(g1_text);
        c.g0 = Expression::parse(g0_text);
        c.f2 = Expression::parse(f2_text);
        c.f1 = Expression::parse(f1_text);
        c.f0 = Expression::parse(f0_text);
        c.constants = std::move(constants);
        return c;
    }

    // Residual of the general equation for a value/derivative pair.
    double residual(double x, double u, double du) const {
        return (g1v(x) * u + g0v(x)) * du - (f2v(x) * u * u + f1v(x) * u + f0v(x));
    }
};

enum class ConstructionKind { bougoffa, julia };

inline const char* to_string(ConstructionKind k) {
    return k == ConstructionKind::bougoffa ? "bougoffa" : "julia";
}

// Implicit general solution alpha(x) U^2 + gamma(x) U = rho(x) + C. The
// coefficient evaluators own cumulative quadratures anchored at the working
// interval's left end; integration-constant shifts are absorbed into C.
struct ImplicitQuadraticSolution {
    ConstructionKind kind = ConstructionKind::bougoffa;
    double c = 0.0;  // C1 or C2
    double xa = 0.0;
    double xb = 1.0;
    std::function<double(double)> alpha, gamma, rho;
};

namespace detail {

inline double central_derivative(const std::function<double(double)>& f, double x) {
    const double step = 1e-6 * std::max(1.0, std::abs(x));
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace detail

// Bougoffa condition: a constant lambda with 2 B1 g0 = lambda B2 g1, where
// B1 = exp(-2 int f2/g1), B2 = exp(-int f1/g0), both anchored at xa. Returns
// the constant when the sampled values agree to 1e-8 relative, else nullopt.
inline std::optional<double> check_bougoffa(const GeneralCoefficients& coeffs, double xa,
                                            double xb, int samples = 101) {
    if (samples < 2) throw PreconditionError("check_bougoffa: need at least 2 samples");
    CumulativeIntegral int_f2_g1([&coeffs](double t) { return coeffs.f2v(t) / coeffs.g1v(t); },
                                 xa);
    CumulativeIntegral int_f1_g0([&coeffs](double t) { return coeffs.f1v(t) / coeffs.g0v(t); },
                                 xa);
    std::vector<double> lambdas(samples);
    double mean = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = xa + (xb - xa) * i / (samples - 1.0);
        const double g1 = coeffs.g1v(x), g0 = coeffs.g0v(x);
        if (g0 == 0.0 || g1 == 0.0)
            throw CoefficientZeroError("check_bougoffa: g0 or g1 vanishes at x = " +
                                       std::to_string(x));
        const double b1 = std::exp(-2.0 * int_f2_g1(x));
        const double b2 = std::exp(-int_f1_g0(x));
        lambdas[i] = 2.0 * b1 * g0 / (b2 * g1);
        mean += lambdas[i];
    }
    mean /= samples;
    double deviation = 0.0;
    for (const double l : lambdas) deviation = std::max(deviation, std::abs(l - mean));
    if (deviation < 1e-8 * (1.0 + std::abs(mean))) return mean;
    return std::nullopt;
}

// Bougoffa general solution: B1 U^2 + lambda B2 U = 2 int (f0/g1) B1 + C1.
inline ImplicitQuadraticSolution bougoffa_solution(const GeneralCoefficients& coeffs,
                                                   double lambda, double c1, double xa,
                                                   double xb) {
    auto int_f2_g1 = std::make_shared<CumulativeIntegral>(
        [coeffs](double t) { return coeffs.f2v(t) / coeffs.g1v(t); }, xa);
    auto int_f1_g0 = std::make_shared<CumulativeIntegral>(
        [coeffs](double t) { return coeffs.f1v(t) / coeffs.g0v(t); }, xa);
    const auto b1 = [int_f2_g1](double x) { return std::exp(-2.0 * (*int_f2_g1)(x)); };
    auto rho_integral = std::make_shared<CumulativeIntegral>(
        [coeffs, b1](double t) { return coeffs.f0v(t) / coeffs.g1v(t) * b1(t); }, xa);

    ImplicitQuadraticSolution sol;
    sol.kind = ConstructionKind::bougoffa;
    sol.c = c1;
    sol.xa = xa;
    sol.xb = xb;
    sol.alpha = b1;
    sol.gamma = [lambda, int_f1_g0](double x) { return lambda * std::exp(-(*int_f1_g0)(x)); };
    sol.rho = [rho_integral](double x) { return 2.0 * (*rho_integral)(x); };
    return sol;
}

// Julia condition: g0 [2 f2 + g1'] = g1 [f1 + g0'], derivatives by central
// finite differences. True iff the identity holds at all samples to 1e-6
// relative.
inline bool check_julia(const GeneralCoefficients& coeffs, double xa, double xb,
                        int samples = 101) {
    if (samples < 2) throw PreconditionError("check_julia: need at least 2 samples");
    const auto g1_fn = [&coeffs](double t) { return coeffs.g1v(t); };
    const auto g0_fn = [&coeffs](double t) { return coeffs.g0v(t); };
    for (int i = 0; i < samples; ++i) {
        const double x = xa + (xb - xa) * i / (samples - 1.0);
        const double g1 = coeffs.g1v(x);
        if (g1 == 0.0)
            throw CoefficientZeroError("check_julia: g1 vanishes at x = " + std::to_string(x));
        const double lhs = coeffs.g0v(x) * (2.0 * coeffs.f2v(x) + detail::central_derivative(g1_fn, x));
        const double rhs = g1 * (coeffs.f1v(x) + detail::central_derivative(g0_fn, x));
        if (std::abs(lhs - rhs) > 1e-6 * std::max({1.0, std::abs(lhs), std::abs(rhs)}))
            return false;
    }
    return true;
}

// Julia general solution: [g1 U^2 + 2 g0 U]/(g1 J) = 2 int f0/(g1 J) + C2,
// J = exp(2 int f2/g1).
inline ImplicitQuadraticSolution julia_solution(const GeneralCoefficients& coeffs, double c2,
                                                double xa, double xb) {
    auto int_f2_g1 = std::make_shared<CumulativeIntegral>(
        [coeffs](double t) { return coeffs.f2v(t) / coeffs.g1v(t); }, xa);
    const auto j = [int_f2_g1](double x) { return std::exp(2.0 * (*int_f2_g1)(x)); };
    auto rho_integral = std::make_shared<CumulativeIntegral>(
        [coeffs, j](double t) {
            const double g1 = coeffs.g1v(t);
            if (g1 == 0.0) throw CoefficientZeroError("julia_solution: g1 vanishes");
            return coeffs.f0v(t) / (g1 * j(t));
        },
        xa);

    ImplicitQuadraticSolution sol;
    sol.kind = ConstructionKind::julia;
    sol.c = c2;
    sol.xa = xa;
    sol.xb = xb;
    sol.alpha = [j](double x) { return 1.0 / j(x); };
    sol.gamma = [coeffs, j](double x) {
        const double g1 = coeffs.g1v(x);
        if (g1 == 0.0) throw CoefficientZeroError("julia_solution: g1 vanishes");
        return 2.0 * coeffs.g0v(x) / (g1 * j(x));
    };
    sol.rho = [rho_integral](double x) { return 2.0 * (*rho_integral)(x); };
    return sol;
}

// Real U values of alpha U^2 + gamma U - (rho + C) = 0 at x; empty when the
// discriminant is negative. Larger root first.
inline std::vector<double> solve_implicit(const ImplicitQuadraticSolution& sol, double x) {
    const double a = sol.alpha(x);
    if (a == 0.0) throw CoefficientZeroError("solve_implicit: alpha vanishes at x");
    const double b = sol.gamma(x);
    const double c = -(sol.rho(x) + sol.c);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    const double sq = std::sqrt(disc);
    // cancellation-stable quadratic roots
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1, r2;
    if (q != 0.0) {
        r1 = q / a;
        r2 = c / q;
    } else {
        r1 = r2 = -b / (2.0 * a);  // b = 0 and disc = 0
    }
    if (r1 < r2) std::swap(r1, r2);
    return {r1, r2};
}

// Quadrature of f over the symmetric interval [-a, a], split at the origin so
// that a removable singular point there never meets a quadrature node. Test
// utility for odd-function checks.
inline double symmetric_integral_check(const Expression& f, double a,
                                       const Bindings& constants = {},
                                       QuadratureOptions opts = {}) {
    if (!(a > 0)) throw PreconditionError("symmetric_integral_check: a must be positive");
    const auto fn = [&](double t) { return f.evaluate(t, constants); };
    return integrate(fn, -a, 0.0, opts) + integrate(fn, 0.0, a, opts);
}

}  // namespace abel
