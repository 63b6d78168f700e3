#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "afields/algebroid.hpp"
#include "afields/whitney.hpp"

namespace afields {

/// Prolongation of a Lie algebroid over the k-fold Whitney sum of E (or E*).
///
/// The prolonged object is materialized as a first-class LieAlgebroid over a
/// base of dimension n + mk with rank m + mk, so every core validator applies
/// to it unchanged. Basis order: the m X-sections first, then the mk vertical
/// sections in the flat fiber order of whitney.hpp.
class ProlongedAlgebroid {
public:
  ProlongedAlgebroid(LieAlgebroid parent, int k, Side side);

  const LieAlgebroid& parent() const { return parent_; }
  int k() const { return k_; }
  Side side() const { return side_; }

  int base_dim() const { return parent_.base_dim() + parent_.rank() * k_; }
  int rank() const { return parent_.rank() + parent_.rank() * k_; }

  /// The prolonged structure as an ordinary algebroid.
  const LieAlgebroid& as_algebroid() const { return *prolonged_; }

private:
  LieAlgebroid parent_;
  int k_;
  Side side_;
  std::shared_ptr<const LieAlgebroid> prolonged_;
};

/// Vertical A-lift of fiber coordinates e at b: z = 0, w(., A) = e.
ProlongedElement vertical_lift(const Eigen::VectorXd& e, const WhitneyPoint& b, int A);

/// A-th Liouville section at b: z = 0, w(., A) = y(., A).
ProlongedElement liouville_section(const WhitneyPoint& b, int A);

/// A-th vertical endomorphism applied to Z: kills the vertical part and
/// sends X coefficients to the A-th vertical slot.
ProlongedElement vertical_endomorphism(const ProlongedElement& Z, int A);

/// Value of a k-tuple of prolongation sections at one point.
struct SopdeValue {
  Eigen::MatrixXd xi;               // m x k, xi(alpha, A) = X-coefficients of xi_A
  std::vector<Eigen::MatrixXd> w;   // k entries, w[A](alpha, B) = vertical coefficients
};

using SopdeSection = std::function<SopdeValue(const WhitneyPoint&)>;

/// Largest |xi^alpha_A(b) - y^alpha_A(b)| over the samples.
double sopde_max_deviation(const SopdeSection& xi, std::span<const WhitneyPoint> samples);

/// Coefficient characterization of the second-order condition.
bool sopde_check(const SopdeSection& xi, std::span<const WhitneyPoint> samples, double tol);

/// Same verdict through the vertical endomorphism / Liouville route.
bool sopde_check_geometric(const SopdeSection& xi, std::span<const WhitneyPoint> samples,
                           double tol);

/// Tangent vectors of the associated k-vector field at b, one column per A,
/// in the flat [q; fiber] coordinates of the Whitney sum.
Eigen::MatrixXd associated_k_vector(const LieAlgebroid& alg, const SopdeValue& v,
                                    const WhitneyPoint& b);

/// Hamiltonian-side analog: sections of the dual prolongation at one point.
struct HamSectionValue {
  Eigen::MatrixXd xi;              // m x k, xi(alpha, A)
  std::vector<Eigen::MatrixXd> w;  // k entries, w[A](B, alpha)
};

Eigen::MatrixXd associated_k_vector(const LieAlgebroid& alg, const HamSectionValue& v,
                                    const CoWhitneyPoint& p);

}  // namespace afields
