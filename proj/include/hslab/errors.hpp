#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

/// A parameter or argument violated one of its stated constraints.
class DomainError : public std::invalid_argument {
public:
    DomainError(std::string field, std::string constraint)
        : std::invalid_argument(field + ": " + constraint),
          field_(std::move(field)), constraint_(std::move(constraint)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string field_;
    std::string constraint_;
};

/// An improper integral fails its convergence window. This is a signal,
/// not only a failure: several checks assert that it fires.
class DivergentIntegral : public std::runtime_error {
public:
    enum class Endpoint { Origin, Head, Diagonal, Tail, Infinity };

    DivergentIntegral(Endpoint where, std::string detail)
        : std::runtime_error(describe(where) + ": " + detail), where_(where) {}

    Endpoint where() const noexcept { return where_; }

    static std::string describe(Endpoint e) {
        switch (e) {
            case Endpoint::Origin:   return "divergent at origin";
            case Endpoint::Head:     return "divergent head closure";
            case Endpoint::Diagonal: return "divergent across diagonal";
            case Endpoint::Tail:     return "divergent tail closure";
            case Endpoint::Infinity: return "divergent at infinity";
        }
        return "divergent";
    }

private:
    Endpoint where_;
};

/// Adaptive quadrature exhausted its evaluation budget.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(std::string detail)
        : std::runtime_error("quadrature budget exhausted: " + std::move(detail)) {}
};

/// A least-squares tail fit failed its residual threshold or preconditions.
class FitError : public std::runtime_error {
public:
    explicit FitError(std::string detail)
        : std::runtime_error("tail fit failed: " + std::move(detail)) {}
};

} // namespace hslab
