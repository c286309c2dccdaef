#pragma once

#include <stdexcept>
#include <string>

namespace fairscope {

/// Base of every error raised by the library. The CLI maps subclasses to
/// process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, schema, or argument.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or unusable input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Download failure or digest mismatch.
class FetchError : public Error {
public:
    using Error::Error;
};

}  // namespace fairscope
