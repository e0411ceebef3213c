#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <utility>

#include "abel/errors.hpp"

namespace abel {

struct QuadratureOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    int max_depth = 45;
};

namespace detail {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1]. The even-index
// Kronrod nodes carry the embedded 7-point Gauss rule.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double kronrod = kGK15Weights[7] * f_mid;
    double gauss = kG7Weights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double sum = f(mid - dx) + f(mid + dx);
        kronrod += kGK15Weights[i] * sum;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

template <class F>
double integrate_rec(F&& f, double a, double b, double tol, int depth, int max_depth) {
    auto [value, err] = gk15(f, a, b);
    if (err <= tol || err <= 1e-3 * std::numeric_limits<double>::epsilon() * std::abs(value))
        return value;
    if (depth >= max_depth)
        throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "]");
    const double mid = 0.5 * (a + b);
    return integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
           integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integral of f over [a, b]. Nodes stay strictly
// interior, so integrands with removable endpoint singularities are fine as
// long as the singular point is an interval endpoint.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
    if (a == b) return 0.0;
    auto [coarse, err0] = detail::gk15(f, a, b);
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(coarse));
    if (err0 <= tol) return coarse;
    const double mid = 0.5 * (a + b);
    return detail::integrate_rec(f, a, mid, 0.5 * tol, 1, opts.max_depth) +
           detail::integrate_rec(f, mid, b, 0.5 * tol, 1, opts.max_depth);
}

// Antiderivative F(x) = int_anchor^x f(t) dt evaluated by quadrature.
// Checkpoints are cached so that repeated ascending (or descending) queries
// integrate only the gap since the nearest previous query. The cache is
// per-object state; do not share one instance across threads.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> f, double anchor, QuadratureOptions opts = {})
        : f_(std::move(f)), anchor_(anchor), opts_(opts) {
        checkpoints_[anchor] = 0.0;
    }

    double anchor() const { return anchor_; }

    double operator()(double x) const {
        if (auto it = checkpoints_.find(x); it != checkpoints_.end()) return it->second;
        // nearest checkpoint below x, else nearest above
        auto above = checkpoints_.upper_bound(x);
        double x0, f0;
        if (above != checkpoints_.begin()) {
            auto below = std::prev(above);
            x0 = below->first;
            f0 = below->second;
        } else {
            x0 = above->first;
            f0 = above->second;
        }
        const double value = f0 + integrate(f_, x0, x, opts_);
        checkpoints_[x] = value;
        return value;
    }

private:
    std::function<double(double)> f_;
    double anchor_ = 0.0;
    QuadratureOptions opts_;
    mutable std::map<double, double> checkpoints_;
};

}  // namespace abel
