#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "afields/errors.hpp"
#include "afields/fields.hpp"

namespace afields {

/// Section of E given by coefficient fields sigma^alpha(q).
struct SectionField {
  VectorField coeff;

  std::vector<ad::Jet> jets(std::span<const ad::Jet> q) const { return coeff(q); }
  Eigen::VectorXd values(const Eigen::VectorXd& q) const {
    auto qs = ad::Jet::constants(q);
    auto cs = coeff(qs);
    Eigen::VectorXd out(cs.size());
    for (size_t i = 0; i < cs.size(); ++i) out[static_cast<int>(i)] = cs[i].value();
    return out;
  }

  static SectionField constant(const Eigen::VectorXd& c) {
    return {[c](std::span<const ad::Jet>) {
      std::vector<ad::Jet> out;
      out.reserve(static_cast<size_t>(c.size()));
      for (int i = 0; i < c.size(); ++i) out.emplace_back(c[i]);
      return out;
    }};
  }
};

/// Candidate morphism from the tangent algebroid of R^k into E, carried by
/// the base map phi^i(t) and the fiber coefficients phi^alpha_A(t).
struct MorphismData {
  int k = 0;
  VectorField base_map;   // t -> phi^i(t), length n
  MatrixField fiber_map;  // t -> phi(alpha, A), m x k
};

struct MorphismResidual {
  Eigen::MatrixXd anchor_res;                // n x k
  std::vector<Eigen::MatrixXd> bracket_res;  // per alpha: k x k

  double max_abs() const {
    double m = anchor_res.size() ? anchor_res.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& b : bracket_res) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
  }
};

struct ValidationReport {
  double max_violation_jacobi = 0.0;
  double max_violation_anchor = 0.0;
  bool pass = false;
  Eigen::VectorXd worst_point;  // sample where the worst violation occurred
  std::string worst_identity;   // "jacobi" or "anchor"

  double max_violation() const { return std::max(max_violation_jacobi, max_violation_anchor); }
};

/// Lie algebroid of rank m over an n-dimensional chart, given by the anchor
/// coefficients rho(i, alpha) and the structure functions C(gamma, alpha, beta).
///
/// Immutable after construction; all evaluation is pure.
class LieAlgebroid {
public:
  LieAlgebroid(int base_dim, int rank, MatrixField anchor, Tensor3Field structure,
               std::string chart_label = {});

  int base_dim() const { return n_; }
  int rank() const { return m_; }
  const std::string& chart_label() const { return label_; }

  JetMat anchor_jets(std::span<const ad::Jet> q) const;
  JetTen3 structure_jets(std::span<const ad::Jet> q) const;
  Eigen::MatrixXd anchor_values(const Eigen::VectorXd& q) const;
  /// Structure function values; out[gamma](alpha, beta).
  std::vector<Eigen::MatrixXd> structure_values(const Eigen::VectorXd& q) const;

  /// rho applied to fiber coordinates: v^i = rho^i_alpha e^alpha.
  Eigen::VectorXd anchor_apply(const Eigen::VectorXd& q, const Eigen::VectorXd& e) const;

  /// Coordinate bracket of two sections at q.
  Eigen::VectorXd bracket(const SectionField& s, const SectionField& t,
                          const Eigen::VectorXd& q) const;

  /// Degree-0 exterior differential: (d f)_alpha = rho^i_alpha df/dq^i.
  Eigen::VectorXd exterior_differential(const ScalarField& f, const Eigen::VectorXd& q) const;

  /// Degree-1 exterior differential evaluated on a pair of sections:
  /// rho(s) mu(t) - rho(t) mu(s) - mu([s, t]).
  double exterior_differential_1(const VectorField& mu, const SectionField& s,
                                 const SectionField& t, const Eigen::VectorXd& q) const;

  /// Degrees 0 and 1 are implemented; anything higher is rejected.
  static void require_degree_supported(int degree);

  /// Evaluate both structure identities at the given samples.
  ValidationReport validate_structure_equations(std::span<const Eigen::VectorXd> samples,
                                                double tol) const;

  /// Max |C(gamma,alpha,beta) + C(gamma,beta,alpha)| over the samples.
  double max_antisymmetry_violation(std::span<const Eigen::VectorXd> samples) const;

  /// Morphism-condition residuals of Phi at t, derivatives taken by AD.
  MorphismResidual morphism_residual(const MorphismData& phi, const Eigen::VectorXd& t) const;

  /// Same residuals from precomputed values and t-derivatives (grid path).
  /// dphi[B](alpha, A) holds d phi^alpha_A / d t^B, dq(i, A) holds d phi^i / d t^A.
  MorphismResidual morphism_residual_values(const Eigen::VectorXd& q, const Eigen::MatrixXd& dq,
                                            const Eigen::MatrixXd& phi,
                                            const std::vector<Eigen::MatrixXd>& dphi) const;

private:
  int n_;
  int m_;
  MatrixField anchor_;
  Tensor3Field structure_;
  std::string label_;
};

}  // namespace afields
