#pragma once

#include <stdexcept>
#include <string>

namespace iaf {

// Bad input: malformed flags, inconsistent layouts, unsupported combinations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A linear system or symbol that cannot be solved.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The time-interpolation system of a stencil is singular at this CFL number.
class SingularCfl : public NumericalError {
public:
    SingularCfl(const std::string& what, double cfl) : NumericalError(what), cfl_(cfl) {}
    double cfl() const { return cfl_; }

private:
    double cfl_;
};

class SingularSymbol : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularCoupling : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnsupportedBoundary : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace iaf
