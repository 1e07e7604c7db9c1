#ifndef ADMMLAB_ERRORS_HPP
#define ADMMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace admmlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, asymmetric or indefinite matrices, bad parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A required inverse does not exist (rank-deficient AA^T, singular linear system).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Cholesky hit a non-positive pivot.
class NotSpdError : public Error {
 public:
  using Error::Error;
};

/// Iterative inner solve ran out of iterations.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Argument lies outside the domain of a conjugate or schedule.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation called without its documented precondition (e.g. no known optimum).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Configuration the solvers deliberately do not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Error sequence never enters the rate-estimation window.
class DegenerateTrajectoryError : public Error {
 public:
  using Error::Error;
};

/// Weak duality or another internal identity failed beyond round-off.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace admmlab

#endif  // ADMMLAB_ERRORS_HPP
