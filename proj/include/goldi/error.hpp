#pragma once

#include <stdexcept>
#include <string>

namespace goldi {

// Bad flags, bad enum values, malformed requests. CLI exit code 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable/ill-formed input data or violated data contracts. CLI exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace goldi
