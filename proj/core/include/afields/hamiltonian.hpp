#pragma once

#include "afields/field_function.hpp"
#include "afields/grid.hpp"
#include "afields/prolongation.hpp"

namespace afields {

/// Hamiltonian field theory data on the dual Whitney sum. Only first
/// derivatives of H are required anywhere on this side.
class HamiltonianSystem {
public:
  HamiltonianSystem(LieAlgebroid alg, int k, FieldFunction H);

  const LieAlgebroid& algebroid() const { return alg_; }
  int k() const { return k_; }
  int n() const { return alg_.base_dim(); }
  int m() const { return alg_.rank(); }
  const FieldFunction& hamiltonian() const { return H_; }

  int fiber_flat(int alpha, int A) const { return A * m() + alpha; }

  struct Derivs {
    double H = 0.0;
    Eigen::VectorXd dq;  // n
    Eigen::MatrixXd dp;  // k x m, dp(A, alpha) = dH/dy^A_alpha
  };
  Derivs derivs(const CoWhitneyPoint& p) const;

private:
  LieAlgebroid alg_;
  int k_;
  FieldFunction H_;
};

/// Liouville 1-sections theta(A, alpha) = p(A, alpha) and the associated
/// 2-section value tables on the prolonged basis {X (first m), V (next mk)}.
struct LiouvilleData {
  Eigen::MatrixXd theta;
  std::vector<Eigen::MatrixXd> omega;
};
LiouvilleData liouville_sections(const LieAlgebroid& alg, int k, const CoWhitneyPoint& p);

/// Section coefficients solving the geometric Hamilton equation, with the
/// underdetermined trace constraint closed by the diagonal gauge.
HamSectionValue solve_hamilton_section(const HamiltonianSystem& sys, const CoWhitneyPoint& p);

/// sum_A i_{xi_A} Omega^A - d H on the prolonged basis.
Eigen::VectorXd hamilton_geometric_residual(const HamiltonianSystem& sys,
                                            const HamSectionValue& xi,
                                            const CoWhitneyPoint& p);

struct HamResidual {
  Eigen::MatrixXd q_res;  // n x k
  Eigen::VectorXd p_res;  // m

  double linf() const {
    double w = q_res.size() ? q_res.cwiseAbs().maxCoeff() : 0.0;
    if (p_res.size()) w = std::max(w, p_res.cwiseAbs().maxCoeff());
    return w;
  }
};
/// Hamilton PDE residual of a discrete field at an interior node.
HamResidual hamilton_residual(const HamiltonianSystem& sys, const GridField& field,
                              const GridIndex& node);

struct Trajectory {
  std::vector<double> t;
  std::vector<CoWhitneyPoint> points;
};
/// Classic one-step 4th-order integration of the k = 1 Hamilton equations.
Trajectory integrate_hamilton_k1(const HamiltonianSystem& sys, const CoWhitneyPoint& p0,
                                 double t_end, int steps);

}  // namespace afields
