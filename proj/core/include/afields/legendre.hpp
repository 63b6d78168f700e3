#pragma once

#include "afields/hamiltonian.hpp"
#include "afields/lagrangian.hpp"

namespace afields {

struct NewtonSettings {
  int max_iter = 50;
  double tol = 1e-12;        // scaled by (|p| + 1)
  double min_step = 1e-6;    // smallest damping factor before giving up
};

/// Fiber derivative of a Lagrangian together with its Newton inverse and the
/// prolonged map between the two prolongations.
///
/// Hyperregularity is never assumed globally; every inversion verifies it
/// operationally and reports failure through NoConvergence/SingularHessian.
class LegendreMap {
public:
  explicit LegendreMap(LagrangianSystem sys, NewtonSettings settings = {});

  const LagrangianSystem& system() const { return sys_; }
  const NewtonSettings& settings() const { return settings_; }

  /// (q, y) -> (q, dL/dy).
  CoWhitneyPoint forward(const WhitneyPoint& b) const;

  /// Prolonged map on basis coefficients; the image sits over forward(Z.base).
  CoProlongedElement prolonged(const ProlongedElement& Z) const;

  struct InvertResult {
    WhitneyPoint point;
    int iterations = 0;
  };
  /// Newton solve of dL/dy = p from the given starting fiber point.
  InvertResult invert(const CoWhitneyPoint& p, const WhitneyPoint& guess) const;
  /// Convenience overload starting from the transposed momenta.
  InvertResult invert(const CoWhitneyPoint& p) const;

  /// H = E_L after inversion; first derivatives come from the implicit
  /// function relation (dH/dp = y*, dH/dq = -dL/dq at the inverse point),
  /// so they are exact regardless of the iteration count.
  HamiltonianSystem induced_hamiltonian() const;

private:
  LagrangianSystem sys_;
  NewtonSettings settings_;
};

struct PullbackCheck {
  bool theta_ok = false;
  bool omega_ok = false;
  double theta_err = 0.0;
  double omega_err = 0.0;
};
/// Compare the Liouville sections pulled back through the prolonged map
/// against the Poincare-Cartan sections at b, on the given pair of elements.
PullbackCheck pullback_check(const LegendreMap& map, const WhitneyPoint& b,
                             const ProlongedElement& Z1, const ProlongedElement& Z2,
                             double tol);

struct TransportNodeReport {
  GridIndex node;
  double el_res_norm = 0.0;
  double ham_res_norm = 0.0;
  int invert_iters = 0;
  bool regular = false;
};
struct TransportResult {
  GridField psi;
  std::vector<TransportNodeReport> nodes;  // interior nodes only
  double max_el = 0.0;
  double max_ham = 0.0;
};
/// Push a discrete Lagrangian-side solution through the Legendre map and
/// quantify both residuals; solutions should map to solutions.
TransportResult solution_transport(const LegendreMap& map, const GridField& eta);

}  // namespace afields
