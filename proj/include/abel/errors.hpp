#pragma once

#include <stdexcept>
#include <string>

namespace abel {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed expression text; `position` is the byte offset of the offending token.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " (at offset " + std::to_string(position) + ")"), position(position) {}
    std::size_t position;
};

// Identifier outside the grammar's alphabet (variable x, constants A/B/S/C, function names).
class UnknownIdentifierError : public SyntaxError {
public:
    UnknownIdentifierError(const std::string& name, std::size_t position)
        : SyntaxError("unknown identifier '" + name + "'", position), name(name) {}
    std::string name;
};

// Evaluation left the real domain (ln of non-positive, division by zero, 0^negative, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Constant referenced by an expression but absent from the bindings map.
class UnboundConstantError : public Error {
public:
    explicit UnboundConstantError(const std::string& name)
        : Error("unbound constant '" + name + "'"), name(name) {}
    std::string name;
};

// The classification heuristic could not decide; caller must supply an override.
class ClassificationError : public Error {
public:
    using Error::Error;
};

// Evaluation requested inside the exclusion radius around x = 0.
class ExclusionZoneError : public Error {
public:
    ExclusionZoneError(double x, double epsilon)
        : Error("x = " + std::to_string(x) + " lies inside the exclusion zone |x| < " +
                std::to_string(epsilon)),
          x(x), epsilon(epsilon) {}
    double x;
    double epsilon;
};

// x + phi = 0: the cubic coefficient b has a pole here.
class PoleError : public Error {
public:
    explicit PoleError(double x) : Error("pole at x = " + std::to_string(x) + " (x + phi = 0)"), x(x) {}
    double x;
};

// Scalar root search found no sign change over the configured range.
class NoBracketError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

// A result exceeded double range; signaled instead of returning infinity.
class OverflowError : public Error {
public:
    using Error::Error;
};

// dx/dtau vanished on a parametric grid point.
class TurningPointError : public Error {
public:
    explicit TurningPointError(double tau)
        : Error("turning point: dx/dtau ~ 0 at tau = " + std::to_string(tau)), tau(tau) {}
    double tau;
};

// Denominator of the Riccati general-solution correction vanished.
class SingularDenominatorError : public Error {
public:
    using Error::Error;
};

// A construction precondition failed (vanishing g0/g1 at a sample).
class CoefficientZeroError : public Error {
public:
    using Error::Error;
};

// Generic precondition violation on a public operation.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace abel
