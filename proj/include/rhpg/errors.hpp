#pragma once

#include <stdexcept>
#include <string>

namespace rhpg {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent inputs: dimension mismatch, non-pd covariance,
// out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

// A factorization or linear solve failed on numerically valid-looking input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, long iterations)
      : Error(what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

// A post-condition that should hold by construction did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// The horizon bound needs ||A_L*||_* < 1.
class BoundInapplicableError : public Error {
 public:
  using Error::Error;
};

// Subproblem Hessian is not positive definite.
class LandscapeDegeneracyError : public Error {
 public:
  using Error::Error;
};

// Policy iterates blew up or became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rhpg
