#pragma once

#include <stdexcept>
#include <string>

namespace hjr {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector lengths or dimension counts disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A scalar or range argument is outside its admissible set.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A state or index lies outside the grid.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two fields that must share a grid do not.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported binary field file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Problem configuration failed to parse or validate.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The time march produced a non-finite value.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace hjr
