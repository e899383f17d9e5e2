#pragma once

#include <stdexcept>
#include <string>

namespace curvedirac {

/// Argument outside the mathematical domain of an operation (negative radius,
/// divergent limit at the origin, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnsupportedOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Grid or run configuration that violates a structural invariant.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative method failed to converge; the message carries the residual.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fewer admissible eigenvalues exist than were requested.
class SpectrumError : public std::runtime_error {
public:
    SpectrumError(const std::string& what, int available)
        : std::runtime_error(what), available_(available) {}

    int available() const noexcept { return available_; }

private:
    int available_;
};

} // namespace curvedirac
