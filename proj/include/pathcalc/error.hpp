#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathcalc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position where parsing stopped.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected, const std::string& found)
        : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected +
                ", found " + found),
          offset_(offset),
          expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnboundVariableError : public Error {
public:
    explicit UnboundVariableError(std::string name)
        : Error("unbound variable '" + name + "'"), name_(std::move(name)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Evaluation left the real domain (log of a non-positive number, division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A value violates a documented invariant of a domain type.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace pathcalc
