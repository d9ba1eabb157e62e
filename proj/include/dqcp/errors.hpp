#pragma once

#include <stdexcept>
#include <string>

namespace dqcp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (circuit, topology, schedule, partition, grid files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The instance cannot be solved: capacity violated or total capacity too small.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit was exceeded (e.g. oracle state space).
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace dqcp
