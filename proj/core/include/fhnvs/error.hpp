#pragma once

#include <stdexcept>
#include <string>

namespace fhnvs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (bad grid size, p out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and an operator) live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class SolveError : public Error {
 public:
  SolveError(const std::string& stage, const std::string& what, double residual, int iterations)
      : Error(stage + ": " + what + " (residual " + std::to_string(residual) + " after " +
              std::to_string(iterations) + " iterations)"),
        stage_(stage),
        residual_(residual),
        iterations_(iterations) {}

  const std::string& stage() const noexcept { return stage_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  std::string stage_;
  double residual_;
  int iterations_;
};

/// CG found p^T A p <= 0: the operator handed to it is not SPD.
class NotSpdError : public SolveError {
 public:
  NotSpdError(const std::string& stage, double curvature, int iterations)
      : SolveError(stage, "operator not SPD, curvature " + std::to_string(curvature), 0.0, iterations) {}
};

/// A coefficient certification required by an operation does not hold.
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace fhnvs
