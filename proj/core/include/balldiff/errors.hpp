#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace balldiff {

// Base class for everything this library throws on purpose. Configuration
// problems (bad parameters, mismatched grids) are distinguished from runtime
// numerical problems (singular integrands, non-converged expansions) so the
// CLI can map them to different exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched or out-of-range dimensions / component indices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration detected before any computation starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Query outside the range covered by computed data (e.g. inverting a time
// change beyond its horizon).
class RangeError : public Error {
 public:
  using Error::Error;
};

// An iterative expansion failed to converge within its cap.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// A quantity blew up at a specific grid index.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what, std::size_t index = 0)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace balldiff
