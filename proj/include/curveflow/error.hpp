#pragma once

#include <stdexcept>
#include <string>

namespace curveflow {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on the arguments was violated.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error("invalid input: " + what) {}
};

// Input is not in general position and the perturbation budget ran out.
class DegenerateConfiguration : public Error {
public:
    explicit DegenerateConfiguration(const std::string& what)
        : Error("degenerate configuration: " + what) {}
};

// Evaluation outside the domain of a closed-form expression.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

}  // namespace curveflow
