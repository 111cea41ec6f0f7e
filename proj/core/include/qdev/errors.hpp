#pragma once

#include <stdexcept>
#include <string>

namespace qdev {

// Every failure raised by the library derives from Error so callers can
// separate numerical/validation failures from std:: exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization failed: a form that must be positive definite is not.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

/// The truncated domain (0, T_max] is too short for the requested eigenvalues.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Tail estimate requested for a cutoff inside the classically allowed region.
class EstimateInvalidError : public Error {
 public:
  using Error::Error;
};

/// Two computed eigenvalues are closer than the simplicity gap.
class SimplicityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Sampling too coarse for the oscillation being integrated.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Temporal and spatial spectral values disagree beyond tolerance.
class MatchingError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant was violated, which signals a solver failure.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdev
