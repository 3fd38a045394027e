#pragma once

#include <stdexcept>
#include <string>

namespace dofnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct PreconditionViolation : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

struct DecompositionFailure : Error {
    using Error::Error;
};

// Search refused or abandoned because of node_limit or time budget.
struct ResourceGuard : Error {
    using Error::Error;
};

struct SolverFailure : Error {
    SolverFailure(int message, const std::string& what)
        : Error("message " + std::to_string(message) + ": " + what), message(message) {}
    int message;
};

}  // namespace dofnet
