#pragma once

#include "afields/models.hpp"

namespace afields {

struct MarchParams {
  int steps = 0;       // number of t1 steps taken from the initial slice
  double h1 = 0.0;     // t1 spacing
  double max_norm = 1e6;  // instability guard
};

/// Explicit second-order marching in t1 for the evolutionary model tags
/// ("wave", "euler-poincare" with k = 2, "sigma" with constant bivector).
/// Remaining axes are periodic with centered differences. The initial slice
/// is a grid field whose axis0 count is 1; the morphism condition is
/// monitored by the caller, never enforced here.
GridField march_evolutionary(const ModelDescriptor& model, const GridField& initial,
                             const MarchParams& prm);

/// Exact traveling-wave field phi = sin(2 pi (t1+t2)) + 0.3 cos(2 pi (t1-t2))
/// sampled with exact first derivatives in the fiber slots. Expects a
/// two-axis periodic spec over the unit torus.
GridField wave_exact_field(const GridSpec& spec);

/// Initial slice of the exact traveling wave at t1 = 0.
GridField wave_initial_slice(int count2, double h2);

/// Abelian k = 2 transport profile y1 = y2 = f(t1 + t2) for the Lorentzian
/// rank-m system; exact solution of the marching equations with C = 0.
GridField ep_abelian_exact_field(const GridSpec& spec, int m);
GridField ep_initial_slice(int m, int count2, double h2);

/// Constant-momentum sigma-model solution: p^A fixed covectors and
/// q(t) = q0 - Lambda p^1 t1 - Lambda p^2 t2.
GridField sigma_exact_field(const GridSpec& spec, const Eigen::MatrixXd& lambda,
                            const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                            const Eigen::VectorXd& q0);
GridField sigma_initial_slice(const Eigen::MatrixXd& lambda, const Eigen::VectorXd& p1,
                              const Eigen::VectorXd& p2, const Eigen::VectorXd& q0,
                              int count2, double h2);

/// Largest Euler-Lagrange/morphism residual over the interior nodes.
struct GridResidualNorms {
  double el_linf = 0.0;
  double el_l2 = 0.0;
  double morphism_linf = 0.0;
  long nodes = 0;
};
GridResidualNorms el_residual_norms(const LagrangianSystem& sys, const GridField& field);

struct HamGridResidualNorms {
  double linf = 0.0;
  double l2 = 0.0;
  long nodes = 0;
};
HamGridResidualNorms ham_residual_norms(const HamiltonianSystem& sys, const GridField& field);

}  // namespace afields
