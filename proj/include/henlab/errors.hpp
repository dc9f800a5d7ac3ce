#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace henlab {

// Invalid input parameters or points outside the region where an object is defined.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A ladder rung does not exist at this parameter (negative radicand).
struct LadderError : DomainError {
  using DomainError::DomainError;
};

// Segment of the next factor not contained in the image of the previous one.
struct ProductUndefinedError : DomainError {
  using DomainError::DomainError;
};

// Inverse branch of an order-1 factor has no real solution.
struct BranchError : DomainError {
  using DomainError::DomainError;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WordParseError : ConfigError {
  WordParseError(const std::string& msg, std::size_t pos)
      : ConfigError(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

}  // namespace henlab
