#include "afields/prolongation.hpp"

namespace afields {

namespace {

LieAlgebroid build_prolonged(const LieAlgebroid& parent, int k) {
  const int n = parent.base_dim();
  const int m = parent.rank();
  const int nb = n + m * k;  // prolonged base dim
  const int mb = m + m * k;  // prolonged rank

  // anchor: [[rho(q), 0], [0, I]]; structure constants live on the X block only.
  MatrixField anchor = [parent, n, m, k, nb, mb](std::span<const ad::Jet> x) {
    JetMat rho = parent.anchor_jets(x.subspan(0, static_cast<size_t>(n)));
    JetMat out(nb, mb);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a) out.at(i, a) = rho.at(i, a);
    for (int v = 0; v < m * k; ++v) out.at(n + v, m + v) = ad::Jet(1.0);
    return out;
  };

  Tensor3Field structure = [parent, n, m, mb](std::span<const ad::Jet> x) {
    JetTen3 c = parent.structure_jets(x.subspan(0, static_cast<size_t>(n)));
    JetTen3 out(mb, mb, mb);
    for (int g = 0; g < m; ++g)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out.at(g, a, b) = c.at(g, a, b);
    return out;
  };

  return LieAlgebroid(nb, mb, std::move(anchor), std::move(structure),
                      parent.chart_label().empty() ? std::string{}
                                                   : parent.chart_label() + ":prolonged");
}

void check_slot(int A, int k) {
  if (A < 0 || A >= k) throw DimensionMismatch("slot index A out of range");
}

}  // namespace

ProlongedAlgebroid::ProlongedAlgebroid(LieAlgebroid parent, int k, Side side)
    : parent_(std::move(parent)), k_(k), side_(side) {
  if (k_ < 1) throw DimensionMismatch("prolongation needs k >= 1");
  prolonged_ = std::make_shared<const LieAlgebroid>(build_prolonged(parent_, k_));
}

ProlongedElement vertical_lift(const Eigen::VectorXd& e, const WhitneyPoint& b, int A) {
  check_slot(A, b.k());
  if (e.size() != b.m()) throw DimensionMismatch("vertical_lift: fiber size mismatch");
  ProlongedElement out = ProlongedElement::zero(b);
  out.w.col(A) = e;
  return out;
}

ProlongedElement liouville_section(const WhitneyPoint& b, int A) {
  check_slot(A, b.k());
  ProlongedElement out = ProlongedElement::zero(b);
  out.w.col(A) = b.y.col(A);
  return out;
}

ProlongedElement vertical_endomorphism(const ProlongedElement& Z, int A) {
  check_slot(A, Z.base.k());
  ProlongedElement out = ProlongedElement::zero(Z.base);
  out.w.col(A) = Z.z;
  return out;
}

double sopde_max_deviation(const SopdeSection& xi, std::span<const WhitneyPoint> samples) {
  double worst = 0.0;
  for (const WhitneyPoint& b : samples) {
    SopdeValue v = xi(b);
    worst = std::max(worst, (v.xi - b.y).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool sopde_check(const SopdeSection& xi, std::span<const WhitneyPoint> samples, double tol) {
  if (samples.empty()) throw Error("sopde_check: no sample points");
  return sopde_max_deviation(xi, samples) <= tol;
}

bool sopde_check_geometric(const SopdeSection& xi, std::span<const WhitneyPoint> samples,
                           double tol) {
  if (samples.empty()) throw Error("sopde_check_geometric: no sample points");
  double worst = 0.0;
  for (const WhitneyPoint& b : samples) {
    SopdeValue v = xi(b);
    for (int A = 0; A < b.k(); ++A) {
      // J^A applied to xi_A, built from its basis coefficients
      ProlongedElement xiA;
      xiA.base = b;
      xiA.z = v.xi.col(A);
      xiA.w = v.w[static_cast<size_t>(A)];
      ProlongedElement lhs = vertical_endomorphism(xiA, A);
      ProlongedElement rhs = liouville_section(b, A);
      worst = std::max(worst, (lhs.w - rhs.w).cwiseAbs().maxCoeff());
      worst = std::max(worst, lhs.z.cwiseAbs().maxCoeff());
    }
  }
  return worst <= tol;
}

Eigen::MatrixXd associated_k_vector(const LieAlgebroid& alg, const SopdeValue& v,
                                    const WhitneyPoint& b) {
  const int n = b.n(), m = b.m(), k = b.k();
  Eigen::MatrixXd rho = alg.anchor_values(b.q);
  Eigen::MatrixXd out(n + m * k, k);
  for (int A = 0; A < k; ++A) {
    Eigen::VectorXd col(n + m * k);
    col.head(n) = rho * v.xi.col(A);
    for (int B = 0; B < k; ++B)
      for (int a = 0; a < m; ++a)
        col[flat_fiber_index(n, m, a, B)] = v.w[static_cast<size_t>(A)](a, B);
    out.col(A) = col;
  }
  return out;
}

Eigen::MatrixXd associated_k_vector(const LieAlgebroid& alg, const HamSectionValue& v,
                                    const CoWhitneyPoint& p) {
  const int n = p.n(), m = p.m(), k = p.k();
  Eigen::MatrixXd rho = alg.anchor_values(p.q);
  Eigen::MatrixXd out(n + m * k, k);
  for (int A = 0; A < k; ++A) {
    Eigen::VectorXd col(n + m * k);
    col.head(n) = rho * v.xi.col(A);
    for (int B = 0; B < k; ++B)
      for (int a = 0; a < m; ++a)
        col[flat_fiber_index(n, m, a, B)] = v.w[static_cast<size_t>(A)](B, a);
    out.col(A) = col;
  }
  return out;
}

}  // namespace afields
