#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace discsense {

// Base for every failure the pipeline reports to the user.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file content; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Invalid configuration or violated precondition on user-supplied settings.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace discsense
