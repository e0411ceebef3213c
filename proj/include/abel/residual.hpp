#pragma once

#include <cmath>
#include <vector>

#include "abel/problem.hpp"

namespace abel {

// ODE residual r(x) = y y' - y - Q(x) on a uniform grid, with centered
// differences in the interior and second-order one-sided stencils at the ends.
inline std::vector<double> ode_residual(const CanonicalProblem& problem,
                                        const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size()) throw PreconditionError("ode_residual: grid/value size mismatch");
    if (n < 3) throw PreconditionError("ode_residual: need at least 3 samples");
    const double h = xs[1] - xs[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((xs[i + 1] - xs[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw PreconditionError("ode_residual: grid is not uniform");

    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dy;
        if (i == 0) dy = (-3.0 * ys[0] + 4.0 * ys[1] - ys[2]) / (2.0 * h);
        else if (i + 1 == n) dy = (3.0 * ys[n - 1] - 4.0 * ys[n - 2] + ys[n - 3]) / (2.0 * h);
        else dy = (ys[i + 1] - ys[i - 1]) / (2.0 * h);
        r[i] = ys[i] * dy - ys[i] - problem.q(xs[i]);
    }
    return r;
}

}  // namespace abel
