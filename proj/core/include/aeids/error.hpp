#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aeids {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failures caused by user input: files, config values, malformed data.
/// The CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(what + ", line " + std::to_string(line)), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class VersionMismatch : public InputError {
public:
    using InputError::InputError;
};

}  // namespace aeids
