#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfcount {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a stream invariant (duplicate sequence
/// numbers, non-monotonic timestamps).
class IntegrityError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Fewer samples than an operation needs (e.g. a window larger than the series).
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: bad parameter combinations, overlapping events,
/// unknown receiver ids.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

/// Data that carries no usable signal (all-identical samples, zero-variance
/// variables).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Unreadable or unrecognized serialized artifact (model files).
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace rfcount
