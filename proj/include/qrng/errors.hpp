#pragma once

#include <stdexcept>
#include <string>

namespace qrng {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation needs at least one element (bit, pair, counter) and got none.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// A device or run configuration violates one of its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A request exceeds a fixed capacity (counter width, enumeration size).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A statistical test was given fewer bits than it needs.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A file exists but its contents are malformed or inconsistent.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace qrng
