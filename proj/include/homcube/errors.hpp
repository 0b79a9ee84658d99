#ifndef HOMCUBE_ERRORS_HPP
#define HOMCUBE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace homcube {

// Mismatched rings, variable counts or matrix dimensions.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (non-unit
// specialization point, non-full-dimensional cone, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation is only available over a restricted class of rings.
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented precondition of a constructor was violated by the caller.
struct ContractViolation : std::runtime_error {
    explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// An identity that is guaranteed by construction failed; signals a bug
// (usually a sign error) rather than bad input.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace homcube

#endif
