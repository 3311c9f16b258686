#pragma once

#include <stdexcept>
#include <string>

namespace svilab {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A set representation the closed-form routines cannot handle, e.g. a
/// recession cone that differs from the target cone.
class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

/// A base point that was required to be feasible is not.
class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a numerical procedure that cannot proceed.
class NumericError : public Error {
 public:
  using Error::Error;
};

void require_same_dim(long a, long b, const std::string& what);

}  // namespace svilab
