#pragma once

#include <stdexcept>
#include <string>

namespace afields {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Fiber Hessian of the Lagrangian is numerically singular at the point.
struct SingularHessian : Error {
  explicit SingularHessian(double cond)
      : Error("singular fiber Hessian (condition estimate " + std::to_string(cond) + ")"),
        condition(cond) {}
  double condition;
};

struct NoConvergence : Error {
  NoConvergence(int iters, double residual)
      : Error("Newton iteration failed to converge after " + std::to_string(iters) +
              " steps (residual " + std::to_string(residual) + ")"),
        iterations(iters), residual(residual) {}
  int iterations;
  double residual;
};

/// Structure constants fail the Jacobi identity.
struct JacobiViolation : Error {
  explicit JacobiViolation(double violation)
      : Error("structure constants violate the Jacobi identity (max residual " +
              std::to_string(violation) + ")"),
        violation(violation) {}
  double violation;
};

/// A grid operation touched a node where the stencil does not fit.
struct BoundaryNode : Error {
  using Error::Error;
};

struct UnstableMarch : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace afields
