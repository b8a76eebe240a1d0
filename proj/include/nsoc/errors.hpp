#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsoc {

// Shapes of operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid user-supplied parameter or configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Direct factorization met a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::int64_t pivot_row, const std::string& what)
      : std::runtime_error(what), pivot_row_(pivot_row) {}

  // Row of the original matrix at which elimination broke down, -1 if unknown.
  std::int64_t pivot_row() const noexcept { return pivot_row_; }

 private:
  std::int64_t pivot_row_;
};

// An iterative solver whose result is needed as a value did not converge.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsoc
