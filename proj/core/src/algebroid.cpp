#include "afields/algebroid.hpp"

#include <cmath>

namespace afields {

LieAlgebroid::LieAlgebroid(int base_dim, int rank, MatrixField anchor, Tensor3Field structure,
                           std::string chart_label)
    : n_(base_dim), m_(rank), anchor_(std::move(anchor)), structure_(std::move(structure)),
      label_(std::move(chart_label)) {
  if (n_ < 0 || m_ < 1) throw DimensionMismatch("LieAlgebroid: need n >= 0, m >= 1");
}

JetMat LieAlgebroid::anchor_jets(std::span<const ad::Jet> q) const {
  JetMat rho = anchor_(q);
  if (rho.rows != n_ || rho.cols != m_)
    throw DimensionMismatch("anchor field returned wrong shape");
  return rho;
}

JetTen3 LieAlgebroid::structure_jets(std::span<const ad::Jet> q) const {
  JetTen3 c = structure_(q);
  if (c.d0 != m_ || c.d1 != m_ || c.d2 != m_)
    throw DimensionMismatch("structure field returned wrong shape");
  return c;
}

Eigen::MatrixXd LieAlgebroid::anchor_values(const Eigen::VectorXd& q) const {
  auto qs = ad::Jet::constants(q);
  return anchor_jets(qs).values();
}

std::vector<Eigen::MatrixXd> LieAlgebroid::structure_values(const Eigen::VectorXd& q) const {
  auto qs = ad::Jet::constants(q);
  JetTen3 c = structure_jets(qs);
  std::vector<Eigen::MatrixXd> out(static_cast<size_t>(m_));
  for (int g = 0; g < m_; ++g) {
    out[g].resize(m_, m_);
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b) out[g](a, b) = c.at(g, a, b).value();
  }
  return out;
}

Eigen::VectorXd LieAlgebroid::anchor_apply(const Eigen::VectorXd& q,
                                           const Eigen::VectorXd& e) const {
  if (q.size() != n_ || e.size() != m_)
    throw DimensionMismatch("anchor_apply: dimension mismatch");
  return anchor_values(q) * e;
}

Eigen::VectorXd LieAlgebroid::bracket(const SectionField& s, const SectionField& t,
                                      const Eigen::VectorXd& q) const {
  auto qs = ad::Jet::variables(q);
  auto sj = s.jets(qs);
  auto tj = t.jets(qs);
  if (static_cast<int>(sj.size()) != m_ || static_cast<int>(tj.size()) != m_)
    throw DimensionMismatch("bracket: section has wrong rank");
  JetMat rho = anchor_jets(qs);
  JetTen3 c = structure_jets(qs);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
  for (int g = 0; g < m_; ++g) {
    double acc = 0.0;
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b)
        acc += sj[a].value() * tj[b].value() * c.at(g, a, b).value();
    for (int i = 0; i < n_; ++i) {
      for (int a = 0; a < m_; ++a) {
        acc += rho.at(i, a).value() * sj[a].value() * tj[g].grad(n_)[i];
        acc -= rho.at(i, a).value() * tj[a].value() * sj[g].grad(n_)[i];
      }
    }
    out[g] = acc;
  }
  return out;
}

Eigen::VectorXd LieAlgebroid::exterior_differential(const ScalarField& f,
                                                    const Eigen::VectorXd& q) const {
  auto qs = ad::Jet::variables(q);
  ad::Jet fj = f(qs);
  Eigen::VectorXd df = fj.grad(n_);
  Eigen::MatrixXd rho = anchor_jets(qs).values();
  Eigen::VectorXd out(m_);
  for (int a = 0; a < m_; ++a) {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += rho(i, a) * df[i];
    out[a] = acc;
  }
  return out;
}

double LieAlgebroid::exterior_differential_1(const VectorField& mu, const SectionField& s,
                                             const SectionField& t,
                                             const Eigen::VectorXd& q) const {
  auto qs = ad::Jet::variables(q);
  auto muj = mu(qs);
  auto sj = s.jets(qs);
  auto tj = t.jets(qs);
  if (static_cast<int>(muj.size()) != m_)
    throw DimensionMismatch("exterior_differential_1: covector has wrong rank");
  Eigen::MatrixXd rho = anchor_jets(qs).values();

  // pairing functions mu(t) and mu(s) as jets in q
  ad::Jet mu_t(0.0), mu_s(0.0);
  for (int a = 0; a < m_; ++a) {
    mu_t += muj[a] * tj[a];
    mu_s += muj[a] * sj[a];
  }

  Eigen::VectorXd s_val(m_), t_val(m_);
  for (int a = 0; a < m_; ++a) {
    s_val[a] = sj[a].value();
    t_val[a] = tj[a].value();
  }
  Eigen::VectorXd rho_s = rho * s_val;
  Eigen::VectorXd rho_t = rho * t_val;

  double term1 = rho_s.dot(mu_t.grad(n_));
  double term2 = rho_t.dot(mu_s.grad(n_));

  Eigen::VectorXd br = bracket(s, t, q);
  double term3 = 0.0;
  for (int a = 0; a < m_; ++a) term3 += muj[a].value() * br[a];

  return term1 - term2 - term3;
}

void LieAlgebroid::require_degree_supported(int degree) {
  if (degree < 0 || degree > 1)
    throw Error("exterior differential is implemented for degrees 0 and 1 only");
}

ValidationReport LieAlgebroid::validate_structure_equations(
    std::span<const Eigen::VectorXd> samples, double tol) const {
  ValidationReport rep;
  if (samples.empty()) throw Error("validate_structure_equations: no sample points");

  auto record = [&rep](double viol, const Eigen::VectorXd& q, const char* which, double& slot) {
    const double prev = std::max(rep.max_violation_jacobi, rep.max_violation_anchor);
    if (viol > slot) slot = viol;
    if (viol > prev || rep.worst_identity.empty()) {
      rep.worst_point = q;
      rep.worst_identity = which;
    }
  };

  for (const Eigen::VectorXd& q : samples) {
    auto qs = ad::Jet::variables(q);
    JetMat rho = anchor_jets(qs);
    JetTen3 c = structure_jets(qs);

    // Cyclic Jacobi-type identity over all index triples. Repeated indices
    // only cancel through antisymmetry, so corrupted tensors fail here too.
    for (int nu = 0; nu < m_; ++nu) {
      for (int a = 0; a < m_; ++a) {
        for (int b = 0; b < m_; ++b) {
          for (int g = 0; g < m_; ++g) {
            double acc = 0.0;
            const int idx[3][3] = {{a, b, g}, {b, g, a}, {g, a, b}};
            for (const auto& p : idx) {
              for (int i = 0; i < n_; ++i)
                acc += rho.at(i, p[0]).value() * c.at(nu, p[1], p[2]).grad(n_)[i];
              for (int mu = 0; mu < m_; ++mu)
                acc += c.at(nu, p[0], mu).value() * c.at(mu, p[1], p[2]).value();
            }
            record(std::abs(acc), q, "jacobi", rep.max_violation_jacobi);
          }
        }
      }
    }

    // anchor compatibility identity
    for (int a = 0; a < m_; ++a) {
      for (int b = 0; b < m_; ++b) {
        for (int i = 0; i < n_; ++i) {
          double acc = 0.0;
          for (int j = 0; j < n_; ++j) {
            acc += rho.at(j, a).value() * rho.at(i, b).grad(n_)[j];
            acc -= rho.at(j, b).value() * rho.at(i, a).grad(n_)[j];
          }
          for (int g = 0; g < m_; ++g) acc -= rho.at(i, g).value() * c.at(g, a, b).value();
          record(std::abs(acc), q, "anchor", rep.max_violation_anchor);
        }
      }
    }
  }

  rep.pass = rep.max_violation() <= tol;
  return rep;
}

double LieAlgebroid::max_antisymmetry_violation(
    std::span<const Eigen::VectorXd> samples) const {
  double worst = 0.0;
  for (const Eigen::VectorXd& q : samples) {
    auto qs = ad::Jet::constants(q);
    JetTen3 c = structure_jets(qs);
    for (int g = 0; g < m_; ++g)
      for (int a = 0; a < m_; ++a)
        for (int b = 0; b < m_; ++b)
          worst = std::max(worst,
                           std::abs(c.at(g, a, b).value() + c.at(g, b, a).value()));
  }
  return worst;
}

MorphismResidual LieAlgebroid::morphism_residual(const MorphismData& phi,
                                                 const Eigen::VectorXd& t) const {
  const int k = phi.k;
  auto ts = ad::Jet::variables(t);
  auto base = phi.base_map(ts);
  JetMat fib = phi.fiber_map(ts);
  if (static_cast<int>(base.size()) != n_ || fib.rows != m_ || fib.cols != k)
    throw DimensionMismatch("morphism_residual: map has wrong shape");

  Eigen::VectorXd q(n_);
  for (int i = 0; i < n_; ++i) q[i] = base[i].value();
  Eigen::MatrixXd dq(n_, k);
  for (int i = 0; i < n_; ++i) dq.row(i) = base[i].grad(k).transpose();

  Eigen::MatrixXd fval(m_, k);
  std::vector<Eigen::MatrixXd> dphi(static_cast<size_t>(k), Eigen::MatrixXd(m_, k));
  for (int a = 0; a < m_; ++a) {
    for (int A = 0; A < k; ++A) {
      fval(a, A) = fib.at(a, A).value();
      Eigen::VectorXd g = fib.at(a, A).grad(k);
      for (int B = 0; B < k; ++B) dphi[static_cast<size_t>(B)](a, A) = g[B];
    }
  }
  return morphism_residual_values(q, dq, fval, dphi);
}

MorphismResidual LieAlgebroid::morphism_residual_values(
    const Eigen::VectorXd& q, const Eigen::MatrixXd& dq, const Eigen::MatrixXd& phi,
    const std::vector<Eigen::MatrixXd>& dphi) const {
  const int k = static_cast<int>(phi.cols());
  Eigen::MatrixXd rho = anchor_values(q);
  auto c = structure_values(q);

  MorphismResidual res;
  res.anchor_res = dq - rho * phi;

  res.bracket_res.assign(static_cast<size_t>(m_), Eigen::MatrixXd::Zero(k, k));
  for (int a = 0; a < m_; ++a) {
    for (int A = 0; A < k; ++A) {
      for (int B = 0; B < k; ++B) {
        double acc = dphi[static_cast<size_t>(B)](a, A) - dphi[static_cast<size_t>(A)](a, B);
        for (int b = 0; b < m_; ++b)
          for (int g = 0; g < m_; ++g) acc += c[static_cast<size_t>(a)](b, g) * phi(b, B) * phi(g, A);
        res.bracket_res[static_cast<size_t>(a)](A, B) = acc;
      }
    }
  }
  return res;
}

}  // namespace afields
