#pragma once

#include <stdexcept>
#include <string>

namespace sgmix {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument or configuration value.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// Malformed or unreadable input data.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Numerical breakdown (singular matrix, non-finite intermediate).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Series with zero variance where a spread estimate is required.
class DegenerateSeriesError : public Error {
public:
    explicit DegenerateSeriesError(const std::string& msg) : Error(msg) {}
};

// Requested operation not available for the given model.
class UnsupportedOperationError : public Error {
public:
    explicit UnsupportedOperationError(const std::string& msg) : Error(msg) {}
};

}  // namespace sgmix
