#pragma once

#include <stdexcept>
#include <string>

namespace mfdp {

/// Caller violated a documented precondition.
struct ContractViolation : std::invalid_argument {
    explicit ContractViolation(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A matrix required to be positive semidefinite is not.
struct NotPsdError : std::domain_error {
    explicit NotPsdError(const std::string& msg) : std::domain_error(msg) {}
};

/// Schema parameters are inconsistent (e.g. n != k*b).
struct InvalidSchemaError : std::invalid_argument {
    explicit InvalidSchemaError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// The nonnegativity fast path was invoked on an encoder whose Gram matrix
/// has negative entries on constrained pairs; callers should fall back to
/// brute force.
struct NonnegativityViolated : std::domain_error {
    explicit NonnegativityViolated(const std::string& msg) : std::domain_error(msg) {}
};

/// Brute-force enumeration would exceed the participation guard (k > 20).
struct TooLargeError : std::invalid_argument {
    explicit TooLargeError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A numerical routine failed to meet its accuracy contract.
struct SolverFailure : std::runtime_error {
    explicit SolverFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mfdp
