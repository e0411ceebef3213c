#pragma once

#include <optional>
#include <string>

#include "abel/expr.hpp"

namespace abel {

// Canonical-form problem y y' - y = Q(x): the parsed inhomogeneity, its
// constant bindings and classification, the initial condition, and the
// working interval. Every solver consumes this object.
struct CanonicalProblem {
    Expression Q;
    Bindings constants;
    std::optional<InhomogeneityClass> classification;
    double x0 = 1.0;
    double y0 = 1.0;
    double xa = 0.0;
    double xb = 1.0;
    std::optional<double> beta;  // explicit order-effect factor (else from classification)
    std::optional<double> phi;   // explicit integration constant (else fitted from the IC)
    std::string name;

    double q(double x) const { return Q.evaluate(x, constants); }

    void validate() const {
        if (Q.empty()) throw PreconditionError("problem has no inhomogeneity expression");
        if (!(xa < xb)) throw PreconditionError("working interval is empty");
        if (x0 < xa || x0 > xb)
            throw PreconditionError("initial point lies outside the working interval");
    }
};

}  // namespace abel
