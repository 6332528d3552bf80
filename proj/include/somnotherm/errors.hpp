#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace somnotherm {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Input parses but violates a domain invariant (e.g. nonpositive interval).
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ValidationError(const std::string& what) : Error(what), line_(0) {}
    std::size_t line() const { return line_; }  // 0 when not tied to a line

private:
    std::size_t line_;
};

class EmptyRecordingError : public Error {
public:
    using Error::Error;
};

/// Recording is too corrupted to analyze (artifact fraction over budget).
class DataQualityError : public Error {
public:
    using Error::Error;
};

/// Not enough signal to satisfy an operation's minimum span or count.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or configuration value.
class ArgumentError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace somnotherm
