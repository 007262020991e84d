#pragma once

#include <stdexcept>
#include <string>

namespace radial_riesz {

/// Parameter outside the mathematical domain of an operation (gamma not in (0, n), p < 1, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation precondition violated by otherwise well-formed input.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exponent tuple that does not satisfy the scaling relation.
class inconsistent_scaling : public std::invalid_argument {
public:
    inconsistent_scaling(const std::string& what, double residual)
        : std::invalid_argument(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Quadrature that exhausted its subdivision budget before reaching the requested tolerance.
class tolerance_failure : public std::runtime_error {
public:
    tolerance_failure(const std::string& what, double estimate)
        : std::runtime_error(what + " (achieved error estimate " + std::to_string(estimate) + ")"),
          estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// File that cannot be read or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace radial_riesz
