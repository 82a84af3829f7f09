#pragma once

#include <stdexcept>
#include <string>

namespace pushfront {

// Base for everything the library throws on a contract violation.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input parameters (unknown preset, inconsistent datum, narrow grid...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// An iterative solver hit its cap; carries the last residual it saw.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double last_residual)
        : Error(what + " (last residual " + std::to_string(last_residual) + ")"),
          residual_(last_residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Neither convergence nor a recognizable collapse: the question is undecided.
class Indeterminate : public Error {
public:
    using Error::Error;
};

// Explicit step produced values outside [0, kappa] beyond round-off.
class SchemeInstability : public Error {
public:
    using Error::Error;
};

}  // namespace pushfront
