#pragma once

#include <stdexcept>
#include <string>

namespace ts2img {

// Base for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Invalid or inconsistent input data (CLI exit code 3).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

} // namespace ts2img
