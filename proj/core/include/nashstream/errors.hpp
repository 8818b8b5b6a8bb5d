#pragma once

#include <stdexcept>
#include <string>

namespace nashstream {

// Base class for all library errors so callers can catch in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad dimensions, negative values, non-finite numbers,
// unparseable files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation was called with arguments outside its contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A ratio (balance / impartiality) is undefined, e.g. a zero utility in the
// denominator.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

// Two quantities that must relate in a provable way do not, beyond tolerance.
// Signals a bug or a corrupted input, never a normal condition.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// The exhaustive oracle refuses sizes it cannot enumerate.
class OracleLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace nashstream
