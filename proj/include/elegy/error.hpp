#pragma once

#include <stdexcept>
#include <string>

namespace elegy {

// Bad input data: unreadable files, malformed manifests, degenerate datasets.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Caller violated a documented precondition (bad parameter value).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace elegy
