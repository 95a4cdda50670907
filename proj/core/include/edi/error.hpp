#pragma once

#include <stdexcept>
#include <string>

namespace edi {

/// Root of all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent or unsupported configuration (composition vs alphabet, unknown constellation, bad bins...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data violates an operation's precondition (empty sequence, wrong bit-length, zero power...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Index outside of a valid range (e.g. codeword rank >= codebook size).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A closed form was evaluated outside of its domain of validity.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed a configured resource guard.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// The split-step field became non-finite.
class NumericalDivergenceError : public Error {
public:
    using Error::Error;
};

/// Correlation is undefined because one of the inputs has zero variance.
class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

/// File I/O failure; the message carries the offending path.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace edi
