#pragma once

#include <stdexcept>
#include <string>

namespace sigflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments does not hold (bad ids, size mismatch,
/// malformed structure).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to run on an instance above its size cap.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// The flow search ran out of its node or time budget before deciding.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The graph has an edge that lies on no signed circuit.
class NotFlowAdmissible : public Error {
 public:
  using Error::Error;
};

/// An internal invariant of an algorithm failed. Never expected to fire.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigflow
