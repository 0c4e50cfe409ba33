#pragma once

#include <stdexcept>
#include <string>

namespace tlw {

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or cube lies outside the domain cube [0, 2^L)^n.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A level, exponent or parameter is outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Two lattices, level ranges or grids do not match.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A weight has a zero or negative cell value.
class PositivityError : public Error {
public:
    using Error::Error;
};

/// The grid is too coarse for the requested operation.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation is violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The operation is not defined for these arguments (e.g. p = 1 duality).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A quantity is undefined, e.g. normalizing by a zero norm.
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// A file could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration; carries the offending JSON field path.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace tlw
