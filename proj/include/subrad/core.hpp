#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace subrad {

using Complex = std::complex<double>;

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical input (non-positive length, inconsistent density, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A call whose preconditions do not hold (wrong dimensions, n out of range, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Time step too coarse to resolve the superradiant kernel.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Input outside the validity region of the one-mode model.
class RegimeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace subrad
