#pragma once

#include <stdexcept>
#include <string>

namespace negeo {

// Every failure the library raises derives from Error. The concrete type
// selects the C status code and, through it, the CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a precondition: missing series, bad shapes, wrong variant.
class UsageError : public Error {
public:
    using Error::Error;
};

// Input data violates an invariant (asymmetric distances, gaps in a panel).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A mathematical function was evaluated outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// An iterative method failed to converge where convergence is mandatory.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Estimation is ill-posed for the data (e.g. no variance to explain).
class EstimationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace negeo
