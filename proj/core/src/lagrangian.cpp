#include "afields/lagrangian.hpp"

#include <Eigen/SVD>

namespace afields {

namespace {
constexpr double kRegularityThreshold = 1e-10;
}

LagrangianSystem::LagrangianSystem(LieAlgebroid alg, int k, FieldFunction L)
    : alg_(std::move(alg)), k_(k), L_(std::move(L)) {
  if (k_ < 1) throw DimensionMismatch("LagrangianSystem: k >= 1 required");
  if (L_.flat_dim() != alg_.base_dim() + alg_.rank() * k_)
    throw DimensionMismatch("LagrangianSystem: Lagrangian domain does not match");
}

LagrangianSystem::Derivs LagrangianSystem::derivs(const WhitneyPoint& b) const {
  auto d = L_.derivs2(pack(b));
  Derivs out;
  const int N = n(), M = m(), mk = M * k_;
  out.L = d.value;
  out.dq = d.grad.head(N);
  out.dy.resize(M, k_);
  for (int A = 0; A < k_; ++A)
    for (int a = 0; a < M; ++a) out.dy(a, A) = d.grad[flat_fiber_index(N, M, a, A)];
  out.d2qy = d.hess.block(0, N, N, mk);
  out.W = d.hess.block(N, N, mk, mk);
  return out;
}

LagrangianSystem::Derivs LagrangianSystem::derivs1(const WhitneyPoint& b) const {
  auto d = L_.derivs1(pack(b));
  Derivs out;
  const int N = n(), M = m();
  out.L = d.value;
  out.dq = d.grad.head(N);
  out.dy.resize(M, k_);
  for (int A = 0; A < k_; ++A)
    for (int a = 0; a < M; ++a) out.dy(a, A) = d.grad[flat_fiber_index(N, M, a, A)];
  return out;
}

double energy(const LagrangianSystem& sys, const WhitneyPoint& b) {
  auto d = sys.derivs1(b);
  return (b.y.array() * d.dy.array()).sum() - d.L;
}

EnergyDifferential energy_differential(const LagrangianSystem& sys, const WhitneyPoint& b) {
  auto d = sys.derivs(b);
  const int n = sys.n(), m = sys.m(), k = sys.k();
  EnergyDifferential out;

  out.dq.resize(n);
  for (int i = 0; i < n; ++i) {
    double acc = -d.dq[i];
    for (int A = 0; A < k; ++A)
      for (int a = 0; a < m; ++a) acc += b.y(a, A) * d.d2qy(i, sys.fiber_flat(a, A));
    out.dq[i] = acc;
  }

  out.dy.resize(m, k);
  for (int B = 0; B < k; ++B) {
    for (int be = 0; be < m; ++be) {
      double acc = 0.0;
      for (int A = 0; A < k; ++A)
        for (int a = 0; a < m; ++a)
          acc += b.y(a, A) * d.W(sys.fiber_flat(be, B), sys.fiber_flat(a, A));
      out.dy(be, B) = acc;
    }
  }
  return out;
}

CartanData cartan_sections(const LagrangianSystem& sys, const WhitneyPoint& b) {
  auto d = sys.derivs(b);
  const int n = sys.n(), m = sys.m(), k = sys.k();
  const int dim = m + m * k;
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(b.q);
  auto C = sys.algebroid().structure_values(b.q);

  CartanData out;
  out.theta.resize(k, m);
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a) out.theta(A, a) = d.dy(a, A);

  out.omega.assign(static_cast<size_t>(k), Eigen::MatrixXd::Zero(dim, dim));
  for (int A = 0; A < k; ++A) {
    Eigen::MatrixXd& O = out.omega[static_cast<size_t>(A)];
    // X-X block: rho^i_beta L_{q^i y^alpha_A} - rho^i_alpha L_{q^i y^beta_A}
    //            + C^gamma_{alpha beta} L_{y^gamma_A}
    for (int a = 0; a < m; ++a) {
      for (int be = 0; be < m; ++be) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          acc += rho(i, be) * d.d2qy(i, sys.fiber_flat(a, A)) -
                 rho(i, a) * d.d2qy(i, sys.fiber_flat(be, A));
        for (int g = 0; g < m; ++g) acc += C[static_cast<size_t>(g)](a, be) * d.dy(g, A);
        O(a, be) = acc;
      }
    }
    // X-V block: the fiber Hessian row for slot A
    for (int a = 0; a < m; ++a) {
      for (int B = 0; B < k; ++B) {
        for (int be = 0; be < m; ++be) {
          double w = d.W(sys.fiber_flat(be, B), sys.fiber_flat(a, A));
          O(a, m + sys.fiber_flat(be, B)) = w;
          O(m + sys.fiber_flat(be, B), a) = -w;
        }
      }
    }
  }
  return out;
}

HessianInfo hessian(const LagrangianSystem& sys, const WhitneyPoint& b) {
  auto d = sys.derivs(b);
  HessianInfo info;
  info.W = d.W;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.W);
  info.smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  info.smin = svd.singularValues().size()
                  ? svd.singularValues()(svd.singularValues().size() - 1)
                  : 0.0;
  info.regular = info.smin > kRegularityThreshold * info.smax && info.smax > 0.0;
  return info;
}

SopdeValue solve_sopde_coefficients(const LagrangianSystem& sys, const WhitneyPoint& b) {
  const int n = sys.n(), m = sys.m(), k = sys.k();
  auto d = sys.derivs(b);
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(b.q);
  auto C = sys.algebroid().structure_values(b.q);

  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.W);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > kRegularityThreshold * smax) || smax == 0.0)
      throw SingularHessian(smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
  }

  // unknown flat order: u[(A, B, beta)] = (A*k + B)*m + beta
  const int unknowns = m * k * k;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, unknowns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

  for (int a = 0; a < m; ++a) {
    for (int A = 0; A < k; ++A)
      for (int B = 0; B < k; ++B)
        for (int be = 0; be < m; ++be)
          M(a, (A * k + B) * m + be) = d.W(sys.fiber_flat(a, A), sys.fiber_flat(be, B));

    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rho(i, a) * d.dq[i];
    for (int A = 0; A < k; ++A)
      for (int be = 0; be < m; ++be)
        for (int g = 0; g < m; ++g)
          acc += b.y(be, A) * C[static_cast<size_t>(g)](be, a) * d.dy(g, A);
    for (int A = 0; A < k; ++A)
      for (int be = 0; be < m; ++be)
        for (int i = 0; i < n; ++i)
          acc -= b.y(be, A) * rho(i, be) * d.d2qy(i, sys.fiber_flat(a, A));
    rhs[a] = acc;
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
  Eigen::VectorXd u = cod.solve(rhs);  // minimum-norm least squares

  const double scale = std::max({1.0, rhs.cwiseAbs().maxCoeff(), d.W.cwiseAbs().maxCoeff()});
  if ((M * u - rhs).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw Error("solve_sopde_coefficients: linear system left an unexpected residual");

  SopdeValue out;
  out.xi = b.y;
  out.w.assign(static_cast<size_t>(k), Eigen::MatrixXd::Zero(m, k));
  for (int A = 0; A < k; ++A)
    for (int B = 0; B < k; ++B)
      for (int be = 0; be < m; ++be)
        out.w[static_cast<size_t>(A)](be, B) = u[(A * k + B) * m + be];
  return out;
}

SopdeSection sopde_section(const LagrangianSystem& sys) {
  return [&sys](const WhitneyPoint& b) { return solve_sopde_coefficients(sys, b); };
}

Eigen::VectorXd geometric_equation_residual(const LagrangianSystem& sys, const SopdeValue& xi,
                                            const WhitneyPoint& b) {
  const int n = sys.n(), m = sys.m(), k = sys.k();
  const int dim = m + m * k;
  CartanData cd = cartan_sections(sys, b);
  EnergyDifferential dE = energy_differential(sys, b);
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(b.q);

  Eigen::VectorXd res = Eigen::VectorXd::Zero(dim);
  for (int A = 0; A < k; ++A) {
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(dim);
    coef.head(m) = xi.xi.col(A);
    for (int B = 0; B < k; ++B)
      for (int be = 0; be < m; ++be)
        coef[m + sys.fiber_flat(be, B)] = xi.w[static_cast<size_t>(A)](be, B);
    res += cd.omega[static_cast<size_t>(A)].transpose() * coef;  // (i_xi O)_b = O(xi, e_b)
  }

  for (int a = 0; a < m; ++a) {
    double de = 0.0;
    for (int i = 0; i < n; ++i) de += rho(i, a) * dE.dq[i];
    res[a] -= de;
  }
  for (int B = 0; B < k; ++B)
    for (int be = 0; be < m; ++be) res[m + sys.fiber_flat(be, B)] -= dE.dy(be, B);
  return res;
}

ElResidual euler_lagrange_residual(const LagrangianSystem& sys, const GridField& field,
                                   const GridIndex& node) {
  const int n = sys.n(), m = sys.m(), k = sys.k();
  if (field.side() != Side::Lagrangian)
    throw Error("euler_lagrange_residual: field must take values in the Whitney sum");
  if (field.n() != n || field.m() != m || field.k() != k)
    throw DimensionMismatch("euler_lagrange_residual: field shape mismatch");
  if (!field.interior(node)) throw BoundaryNode("euler_lagrange_residual: interior nodes only");

  WhitneyPoint here = field.whitney_at(node);
  auto d0 = sys.derivs1(here);
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(here.q);
  auto C = sys.algebroid().structure_values(here.q);

  ElResidual out;
  out.momentum_scale = d0.dy.cwiseAbs().maxCoeff();

  // sum_A d/dt^A of the slot-A momentum, by central differences of dL/dy(.,A)
  Eigen::VectorXd dmom = Eigen::VectorXd::Zero(m);
  for (int A = 0; A < k; ++A) {
    WhitneyPoint bp = unpack_whitney(field.shifted(node, A, +1), n, m, k);
    WhitneyPoint bm = unpack_whitney(field.shifted(node, A, -1), n, m, k);
    auto dp = sys.derivs1(bp);
    auto dm = sys.derivs1(bm);
    out.momentum_scale =
        std::max({out.momentum_scale, dp.dy.cwiseAbs().maxCoeff(), dm.dy.cwiseAbs().maxCoeff()});
    dmom += (dp.dy.col(A) - dm.dy.col(A)) / (2.0 * field.spec().h[static_cast<size_t>(A)]);
  }

  out.el_res.resize(m);
  for (int a = 0; a < m; ++a) {
    double rhs = 0.0;
    for (int i = 0; i < n; ++i) rhs += rho(i, a) * d0.dq[i];
    for (int Cc = 0; Cc < k; ++Cc)
      for (int be = 0; be < m; ++be)
        for (int g = 0; g < m; ++g)
          rhs += here.y(be, Cc) * C[static_cast<size_t>(g)](be, a) * d0.dy(g, Cc);
    out.el_res[a] = dmom[a] - rhs;
  }

  // delegate the anchor and flatness parts to the morphism residual
  Eigen::MatrixXd dq(n, k);
  std::vector<Eigen::MatrixXd> dphi(static_cast<size_t>(k), Eigen::MatrixXd(m, k));
  for (int B = 0; B < k; ++B) {
    Eigen::VectorXd jet = field.fd_jet(node, B);
    dq.col(B) = jet.head(n);
    for (int A = 0; A < k; ++A)
      for (int a = 0; a < m; ++a)
        dphi[static_cast<size_t>(B)](a, A) = jet[flat_fiber_index(n, m, a, A)];
  }
  MorphismResidual mr =
      sys.algebroid().morphism_residual_values(here.q, dq, here.y, dphi);
  out.anchor_res = std::move(mr.anchor_res);
  out.morphism_res = std::move(mr.bracket_res);
  return out;
}

}  // namespace afields
