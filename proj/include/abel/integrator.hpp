#pragma once

#include <cmath>
#include <cstdlib>
#include <deque>
#include <optional>
#include <vector>

#include "abel/errors.hpp"
#include "abel/problem.hpp"
#include "abel/residual.hpp"
#include "abel/trace.hpp"

namespace abel {

// Fixed-step Adams-Bashforth/Adams-Moulton predictor-corrector for the
// explicit form y' = 1 + Q(x)/y, with a classical 4-stage one-step startup.
struct IntegratorConfig {
    double h_step = 1e-3;
    int order = 4;                // 2, 3, or 4
    int corrector_iterations = 2;
    double y_min = 1e-8;          // |y| below this is treated as the singularity

    void validate() const {
        if (!(h_step > 0)) throw PreconditionError("h_step must be positive");
        if (order < 2 || order > 4) throw PreconditionError("order must be 2, 3, or 4");
        if (corrector_iterations < 1)
            throw PreconditionError("corrector_iterations must be >= 1");
        if (!(y_min > 0)) throw PreconditionError("y_min must be positive");
    }
};

// |y| crossed y_min: the right side 1 + Q/y blows up. Carries the last valid
// abscissa and the partial trace accumulated so far.
class SingularityError : public Error {
public:
    SingularityError(double last_valid_x, SolutionTrace partial)
        : Error("trajectory reached |y| < y_min near x = " + std::to_string(last_valid_x)),
          last_valid_x(last_valid_x),
          partial(std::move(partial)) {}
    double last_valid_x;
    SolutionTrace partial;
};

namespace detail {

inline constexpr double kAB2[2] = {3.0 / 2.0, -1.0 / 2.0};
inline constexpr double kAB3[3] = {23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0};
inline constexpr double kAB4[4] = {55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0};
// Adams-Moulton of matching order; the leading weight multiplies f(x_{n+1}).
inline constexpr double kAM2[2] = {1.0 / 2.0, 1.0 / 2.0};
inline constexpr double kAM3[3] = {5.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
inline constexpr double kAM4[4] = {9.0 / 24.0, 19.0 / 24.0, -5.0 / 24.0, 1.0 / 24.0};

inline const double* ab_weights(int order) {
    return order == 2 ? kAB2 : order == 3 ? kAB3 : kAB4;
}
inline const double* am_weights(int order) {
    return order == 2 ? kAM2 : order == 3 ? kAM3 : kAM4;
}

}  // namespace detail

// Integrates y' = 1 + Q(x)/y from (x0, y0) to x_end (either direction) on a
// uniform grid of round(|x_end-x0|/h_step) steps. Throws SingularityError
// with the partial trace when |y| falls below y_min; Q domain errors
// propagate unchanged.
inline SolutionTrace integrate(const CanonicalProblem& problem, double x0, double y0, double x_end,
                               const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (std::abs(y0) < cfg.y_min)
        throw PreconditionError("integrate: |y0| is already below y_min");

    SolutionTrace trace;
    trace.provenance = Provenance::numeric;
    trace.segments.emplace_back();
    auto& points = trace.segments.back();

    const double span = x_end - x0;
    const long n_steps = std::max(1L, std::lround(std::abs(span) / cfg.h_step));
    if (span == 0.0) {
        points.push_back({x0, y0, 0.0});
        return trace;
    }
    const double h = span / static_cast<double>(n_steps);

    std::vector<double> xs{x0}, ys{y0};
    xs.reserve(n_steps + 1);
    ys.reserve(n_steps + 1);

    const auto finalize = [&](bool singular, double sing_x) {
        points.clear();
        if (xs.size() >= 3) {
            const auto r = ode_residual(problem, xs, ys);
            for (std::size_t i = 0; i < xs.size(); ++i) points.push_back({xs[i], ys[i], r[i]});
        } else {
            for (std::size_t i = 0; i < xs.size(); ++i) points.push_back({xs[i], ys[i], 0.0});
        }
        trace.hit_singularity = singular;
        if (singular) trace.singularity_x = sing_x;
    };

    const auto rhs = [&](double x, double y) -> double {
        if (std::abs(y) < cfg.y_min) throw SingularityError(xs.back(), SolutionTrace{});
        return 1.0 + problem.q(x) / y;
    };

    std::deque<double> f_history;  // newest first: f_n, f_{n-1}, ...
    try {
        f_history.push_front(rhs(x0, y0));
        double x = x0, y = y0;
        for (long step = 0; step < n_steps; ++step) {
            double y_next;
            if (static_cast<int>(f_history.size()) < cfg.order) {
                // classical 4-stage one-step startup
                const double k1 = f_history.front();
                const double k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1);
                const double k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2);
                const double k4 = rhs(x + h, y + h * k3);
                y_next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            } else {
                const double* ab = detail::ab_weights(cfg.order);
                double acc = 0.0;
                for (int i = 0; i < cfg.order; ++i) acc += ab[i] * f_history[i];
                y_next = y + h * acc;  // predictor
                const double* am = detail::am_weights(cfg.order);
                for (int it = 0; it < cfg.corrector_iterations; ++it) {
                    double corr = am[0] * rhs(x + h, y_next);
                    for (int i = 1; i < cfg.order; ++i) corr += am[i] * f_history[i - 1];
                    y_next = y + h * corr;
                }
            }
            x = x0 + (step + 1) * h;
            // A sign change means the continuous trajectory crossed the
            // |y| < y_min band between samples.
            if (std::abs(y_next) < cfg.y_min || y * y_next < 0.0)
                throw SingularityError(xs.back(), SolutionTrace{});
            y = y_next;
            xs.push_back(x);
            ys.push_back(y);
            f_history.push_front(rhs(x, y));
            while (static_cast<int>(f_history.size()) > cfg.order) f_history.pop_back();
        }
    } catch (const SingularityError&) {
        finalize(true, xs.back());
        throw SingularityError(xs.back(), std::move(trace));
    }
    finalize(false, 0.0);
    return trace;
}

// Final value convenience.
inline double integrate_final(const CanonicalProblem& problem, double x0, double y0, double x_end,
                              const IntegratorConfig& cfg = {}) {
    const SolutionTrace t = integrate(problem, x0, y0, x_end, cfg);
    return t.segments.back().back().y;
}

// Empirical order from errors at h and h/2 against a known reference value of
// y(x_end); falls back to Richardson extrapolation (h, h/2, h/4) without one.
inline double convergence_order(const CanonicalProblem& problem, double x0, double y0,
                                double x_end, const IntegratorConfig& cfg,
                                std::optional<double> reference = std::nullopt) {
    IntegratorConfig half = cfg;
    half.h_step = cfg.h_step / 2.0;
    const double y_h = integrate_final(problem, x0, y0, x_end, cfg);
    const double y_h2 = integrate_final(problem, x0, y0, x_end, half);
    if (reference) {
        return std::log2(std::abs(y_h - *reference) / std::abs(y_h2 - *reference));
    }
    IntegratorConfig quarter = cfg;
    quarter.h_step = cfg.h_step / 4.0;
    const double y_h4 = integrate_final(problem, x0, y0, x_end, quarter);
    return std::log2(std::abs(y_h - y_h2) / std::abs(y_h2 - y_h4));
}

}  // namespace abel
