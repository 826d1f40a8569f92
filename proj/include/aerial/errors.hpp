#pragma once

#include <stdexcept>
#include <string>

namespace aerial {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration value; message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; message carries file/field context.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Scenario cannot satisfy the per-BS carrier quota; message names the BS.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Numeric failure in the analytic pipeline (pole collision, overflow,
/// out-of-range probability, quadrature non-convergence).
class NumericError : public Error {
public:
    using Error::Error;
};

/// An operation was invoked with its preconditions violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Exhaustive search refused: instance exceeds the enumeration gate.
class SizeGateError : public Error {
public:
    SizeGateError(const std::string& msg, double count)
        : Error(msg), enumeration_count(count) {}
    double enumeration_count;
};

/// A stability audit that must be empty was not.
class AuditError : public Error {
public:
    using Error::Error;
};

}  // namespace aerial
