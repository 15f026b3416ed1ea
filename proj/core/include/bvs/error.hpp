#pragma once

#include <stdexcept>
#include <string>

namespace bvs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gram matrix of a queried model is not positive definite.
struct SingularError : Error {
    using Error::Error;
};

// A documented precondition of an operation was violated by the caller.
struct ContractError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Model space too large for the requested engine.
struct SizeError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    QuadratureError(const std::string& what, double partial_value, double error_estimate)
        : Error(what), partial(partial_value), estimate(error_estimate) {}
    double partial;
    double estimate;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace bvs
