#pragma once

#include <stdexcept>
#include <string>

namespace fermi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or input validation failure (bad domain, bad order, bad config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical step failed: eigensolver breakdown, spectrum far outside [0,1],
/// memory budget exceeded.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// An adaptive scheme ran out of its evaluation budget before reaching tolerance.
class ConvergenceError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace fermi
