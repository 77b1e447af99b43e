#pragma once

#include <stdexcept>
#include <string>

namespace spall {

/// Raised when an input lies outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical procedure fails to converge or breaks down.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace spall
