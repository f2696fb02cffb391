#pragma once

#include <stdexcept>
#include <string>

namespace tailsum {

/// Base class for all library errors. `code()` is a short stable identifier
/// used in CSV error columns.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Requested quantile level lies inside the atom of the count distribution at zero.
class AtomError : public Error {
public:
    explicit AtomError(const std::string& what) : Error("zero_count_atom", what) {}
};

/// A method does not apply to the given model (e.g. a finite-mean correction
/// for a severity with infinite mean).
class InapplicableError : public Error {
public:
    InapplicableError(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

/// The perturbative series blew up past the divergence guard.
class InstabilityError : public Error {
public:
    explicit InstabilityError(const std::string& what) : Error("unstable_series", what) {}
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error("no_convergence", what) {}
};

/// Monte Carlo budget too small for the requested quantile level.
class InsufficientSamplesError : public Error {
public:
    InsufficientSamplesError(const std::string& what, std::size_t required)
        : Error("insufficient_samples", what), required_(required) {}

    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

} // namespace tailsum
