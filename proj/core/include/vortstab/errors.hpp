#pragma once

#include <stdexcept>
#include <string>

namespace vortstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A linear system is singular or too ill-conditioned to trust.
class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// An iterative procedure (eigen-iteration, quadrature refinement) did not settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace vortstab
