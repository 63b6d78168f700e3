#pragma once

#include <limits>

#include "afields/field_function.hpp"
#include "afields/grid.hpp"
#include "afields/prolongation.hpp"

namespace afields {

/// Lagrangian field theory data: an algebroid, a slot count and a Lagrangian
/// with first and second derivatives.
class LagrangianSystem {
public:
  LagrangianSystem(LieAlgebroid alg, int k, FieldFunction L);

  const LieAlgebroid& algebroid() const { return alg_; }
  int k() const { return k_; }
  int n() const { return alg_.base_dim(); }
  int m() const { return alg_.rank(); }
  const FieldFunction& lagrangian() const { return L_; }

  int fiber_flat(int alpha, int A) const { return A * m() + alpha; }

  /// All derivatives of L at b, decoded into named blocks.
  struct Derivs {
    double L = 0.0;
    Eigen::VectorXd dq;    // n
    Eigen::MatrixXd dy;    // m x k
    Eigen::MatrixXd d2qy;  // n x mk (flat fiber columns)
    Eigen::MatrixXd W;     // mk x mk fiber Hessian
  };
  Derivs derivs(const WhitneyPoint& b) const;
  /// First derivatives only (cheap path for grid sweeps).
  Derivs derivs1(const WhitneyPoint& b) const;

private:
  LieAlgebroid alg_;
  int k_;
  FieldFunction L_;
};

/// E_L = sum_A y^alpha_A dL/dy^alpha_A - L.
double energy(const LagrangianSystem& sys, const WhitneyPoint& b);

/// Exact differential of the energy in base/fiber blocks.
struct EnergyDifferential {
  Eigen::VectorXd dq;  // n
  Eigen::MatrixXd dy;  // m x k
};
EnergyDifferential energy_differential(const LagrangianSystem& sys, const WhitneyPoint& b);

/// Poincare-Cartan data at a point. theta(A, alpha) carries the 1-sections;
/// omega[A] is the full antisymmetric value table on the prolonged basis
/// {X_alpha (first m), V (next mk in flat fiber order)}.
struct CartanData {
  Eigen::MatrixXd theta;
  std::vector<Eigen::MatrixXd> omega;
};
CartanData cartan_sections(const LagrangianSystem& sys, const WhitneyPoint& b);

struct HessianInfo {
  Eigen::MatrixXd W;
  bool regular = false;
  double smin = 0.0;
  double smax = 0.0;

  double condition() const { return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity(); }
};
/// Fiber Hessian with a singular-value regularity verdict
/// (regular iff smin > 1e-10 * smax).
HessianInfo hessian(const LagrangianSystem& sys, const WhitneyPoint& b);

/// Second-order coefficients at b: xi = y and the minimum-norm solution of
/// the m linear equations coupling the vertical coefficients.
SopdeValue solve_sopde_coefficients(const LagrangianSystem& sys, const WhitneyPoint& b);

/// Pointwise solver wrapped as a section.
SopdeSection sopde_section(const LagrangianSystem& sys);

/// sum_A i_{xi_A} Omega^A_L - d E_L on the prolonged basis
/// (X components first, vertical components after).
Eigen::VectorXd geometric_equation_residual(const LagrangianSystem& sys, const SopdeValue& xi,
                                            const WhitneyPoint& b);

/// Euler-Lagrange residual of a discrete field at an interior node, with the
/// morphism-condition residuals reported separately.
struct ElResidual {
  Eigen::VectorXd el_res;                    // m
  Eigen::MatrixXd anchor_res;                // n x k
  std::vector<Eigen::MatrixXd> morphism_res; // per alpha: k x k
  double momentum_scale = 0.0;               // max |dL/dy| over the stencil

  double el_linf() const { return el_res.size() ? el_res.cwiseAbs().maxCoeff() : 0.0; }
  double el_rel() const { return momentum_scale > 0 ? el_linf() / momentum_scale : el_linf(); }
  double morphism_linf() const {
    double w = anchor_res.size() ? anchor_res.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& b : morphism_res) w = std::max(w, b.cwiseAbs().maxCoeff());
    return w;
  }
  double total_linf() const { return std::max(el_linf(), morphism_linf()); }
};
ElResidual euler_lagrange_residual(const LagrangianSystem& sys, const GridField& field,
                                   const GridIndex& node);

}  // namespace afields
