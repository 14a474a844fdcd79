#pragma once

#include <stdexcept>
#include <string>

namespace oamband {

// Base of every error the library raises. Each subclass maps onto one CLI
// exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid input value; the message names the offending field.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside the domain of a special function (e.g. on a branch cut).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Distribution does not have the shape an operation requires.
class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A numerical procedure ran out of budget before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace oamband
