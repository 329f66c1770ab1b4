#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairlat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input violates an operation's precondition.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An operation was called with the wrong interaction mode.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be symmetric is not.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel did not converge, or its result failed the residual contract.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// A least-squares fit had no usable data.
class FitError : public Error {
 public:
  using Error::Error;
};

/// An expected spectral feature (cluster, peak) was not found.
class DetectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace pairlat
