#pragma once

#include <stdexcept>
#include <string>

namespace orthospec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation was called with arguments violating its stated preconditions.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/// A convex body failed validation (non-positive curvature, bad parameters, ...).
class BodyError : public Error {
public:
    explicit BodyError(const std::string& msg) : Error(msg) {}
};

/// A solver or quadrature failed to reach its accuracy target.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// Evaluation was requested at or too close to a pole / outside a validated domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Configuration / scenario parsing problem; carries the offending field path.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& field, const std::string& msg)
        : Error(field + ": " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace orthospec
