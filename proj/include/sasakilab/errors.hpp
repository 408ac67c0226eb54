// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sasakilab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression or manifold-file syntax problem. `offset` is a byte offset into
/// the expression text; `line` is 1-based when the error comes from a file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::size_t line = 0)
        : Error(what), offset_(offset), line_(line) {}
    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t offset_;
    std::size_t line_;
};

/// Mathematical domain violation during evaluation (log of nonpositive, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Metric not invertible / not positive definite at a point.
class SingularMetricError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Bad user input: config, file contents, unknown names, dimension mismatch.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace sasakilab
