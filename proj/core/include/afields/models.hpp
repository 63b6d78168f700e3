#pragma once

#include <optional>
#include <string>

#include "afields/hamiltonian.hpp"
#include "afields/lagrangian.hpp"
#include "afields/poly.hpp"

namespace afields {

/// Tangent-bundle algebroid in a single chart: identity anchor, zero brackets.
LieAlgebroid standard_algebroid(int n);

/// Lie algebra over a point; C[gamma](alpha, beta) must be antisymmetric and
/// satisfy Jacobi (checked, JacobiViolation otherwise).
LieAlgebroid lie_algebra_algebroid(const std::vector<Eigen::MatrixXd>& C);

/// so(3) with the epsilon-tensor brackets.
LieAlgebroid so3_algebroid();
std::vector<Eigen::MatrixXd> so3_structure_constants();

/// Cotangent algebroid of a Poisson structure on R^n given by a polynomial
/// bivector table Lambda[i][j] (antisymmetric). Conventions: the basis
/// covector dq^i is anchored to Lambda^{ij} d/dq^j and the bracket picks up
/// C^k_{ij} = dLambda^{ij}/dq^k, which reproduces the sigma-model field
/// equations dq^i/dt^A + Lambda^{ij} p^A_j = 0. Construction fails if the
/// structure equations do not hold (non-Poisson Lambda).
LieAlgebroid poisson_cotangent_algebroid(const std::vector<std::vector<Polynomial>>& lambda,
                                         int n);

/// Gauge algebroid of a trivial principal bundle chart: n horizontal
/// sections, a Lie algebra g with constants C_g, and a polynomial connection
/// A[a][i](q). The curvature enters the horizontal brackets.
LieAlgebroid atiyah_trivial(int n, const std::vector<Eigen::MatrixXd>& C_g,
                            const std::vector<std::vector<Polynomial>>& A);

/// l = sum_alpha ((y^alpha_1)^2 + (y^alpha_2)^2) on two copies of so(3).
LagrangianSystem harmonic_map_lagrangian();

/// L = -1/2 Lambda^{ij} p^1_i p^2_j on two copies of the cotangent algebroid.
/// The fiber Hessian is degenerate whenever Lambda is; that is a feature of
/// the model, not an error.
LagrangianSystem poisson_sigma_lagrangian(const std::vector<std::vector<Polynomial>>& lambda,
                                          int n);

/// L = 1/2 sum_A s_A y_A^T I y_A on k copies of the Lie algebra; signature
/// defaults to all +1. The (+1, -1) choice makes the k = 2 system marchable.
LagrangianSystem euler_poincare_lagrangian(const std::vector<Eigen::MatrixXd>& C_g,
                                           const Eigen::VectorXd& inertia, int k,
                                           Eigen::VectorXd signature = {});

/// Lorentzian standard Lagrangian: L = 1/2 (y_1^2 - y_2^2) over R, k = 2.
LagrangianSystem wave_lagrangian();

/// A named model bundle for the CLI and the marching schemes.
struct ModelDescriptor {
  std::string name;
  std::shared_ptr<const LieAlgebroid> algebroid;
  std::shared_ptr<const LagrangianSystem> lagrangian;    // may be null
  std::shared_ptr<const HamiltonianSystem> hamiltonian;  // may be null
  std::string march_tag;  // "wave", "euler-poincare", "sigma" or empty
};

/// Registry lookup: "standard:<n>", "so3", "lie:<file>", "poisson:<file>",
/// "atiyah:<file>", "harmonic", "sigma[:<file>]", "euler-poincare[:<file>]",
/// "wave". File-backed entries read the JSON formats described in io.hpp.
ModelDescriptor make_model(const std::string& spec);

}  // namespace afields
