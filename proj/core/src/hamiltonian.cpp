#include "afields/hamiltonian.hpp"

namespace afields {

HamiltonianSystem::HamiltonianSystem(LieAlgebroid alg, int k, FieldFunction H)
    : alg_(std::move(alg)), k_(k), H_(std::move(H)) {
  if (k_ < 1) throw DimensionMismatch("HamiltonianSystem: k >= 1 required");
  if (H_.flat_dim() != alg_.base_dim() + alg_.rank() * k_)
    throw DimensionMismatch("HamiltonianSystem: Hamiltonian domain does not match");
}

HamiltonianSystem::Derivs HamiltonianSystem::derivs(const CoWhitneyPoint& p) const {
  auto d = H_.derivs1(pack(p));
  Derivs out;
  const int N = n(), M = m();
  out.H = d.value;
  out.dq = d.grad.head(N);
  out.dp.resize(k_, M);
  for (int A = 0; A < k_; ++A)
    for (int a = 0; a < M; ++a) out.dp(A, a) = d.grad[flat_fiber_index(N, M, a, A)];
  return out;
}

LiouvilleData liouville_sections(const LieAlgebroid& alg, int k, const CoWhitneyPoint& p) {
  const int m = alg.rank();
  const int dim = m + m * k;
  auto C = alg.structure_values(p.q);

  LiouvilleData out;
  out.theta = p.p;

  out.omega.assign(static_cast<size_t>(k), Eigen::MatrixXd::Zero(dim, dim));
  for (int A = 0; A < k; ++A) {
    Eigen::MatrixXd& O = out.omega[static_cast<size_t>(A)];
    for (int be = 0; be < m; ++be)
      for (int g = 0; g < m; ++g) {
        double acc = 0.0;
        for (int de = 0; de < m; ++de) acc += C[static_cast<size_t>(de)](be, g) * p.p(A, de);
        O(be, g) = acc;
      }
    // X-V pairing: Omega^A(X_beta, V_B^gamma) = delta^A_B delta_beta^gamma
    for (int be = 0; be < m; ++be) {
      O(be, m + flat_fiber_index(0, m, be, A)) += 1.0;
      O(m + flat_fiber_index(0, m, be, A), be) -= 1.0;
    }
  }
  return out;
}

HamSectionValue solve_hamilton_section(const HamiltonianSystem& sys, const CoWhitneyPoint& p) {
  const int n = sys.n(), m = sys.m(), k = sys.k();
  auto d = sys.derivs(p);
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(p.q);
  auto C = sys.algebroid().structure_values(p.q);

  HamSectionValue out;
  out.xi.resize(m, k);
  for (int B = 0; B < k; ++B)
    for (int a = 0; a < m; ++a) out.xi(a, B) = d.dp(B, a);

  Eigen::VectorXd trace_rhs(m);
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    for (int Cs = 0; Cs < k; ++Cs)
      for (int be = 0; be < m; ++be)
        for (int de = 0; de < m; ++de)
          acc += C[static_cast<size_t>(de)](a, be) * p.p(Cs, de) * d.dp(Cs, be);
    for (int i = 0; i < n; ++i) acc += rho(i, a) * d.dq[i];
    trace_rhs[a] = -acc;
  }

  // diagonal gauge: the trace is split equally over the k diagonal slots
  out.w.assign(static_cast<size_t>(k), Eigen::MatrixXd::Zero(k, m));
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a) out.w[static_cast<size_t>(A)](A, a) = trace_rhs[a] / k;
  return out;
}

Eigen::VectorXd hamilton_geometric_residual(const HamiltonianSystem& sys,
                                            const HamSectionValue& xi,
                                            const CoWhitneyPoint& p) {
  const int n = sys.n(), m = sys.m(), k = sys.k();
  const int dim = m + m * k;
  LiouvilleData ld = liouville_sections(sys.algebroid(), k, p);
  auto d = sys.derivs(p);
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(p.q);

  Eigen::VectorXd res = Eigen::VectorXd::Zero(dim);
  for (int A = 0; A < k; ++A) {
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(dim);
    coef.head(m) = xi.xi.col(A);
    for (int B = 0; B < k; ++B)
      for (int a = 0; a < m; ++a)
        coef[m + flat_fiber_index(0, m, a, B)] = xi.w[static_cast<size_t>(A)](B, a);
    res += ld.omega[static_cast<size_t>(A)].transpose() * coef;
  }

  for (int a = 0; a < m; ++a) {
    double de = 0.0;
    for (int i = 0; i < n; ++i) de += rho(i, a) * d.dq[i];
    res[a] -= de;
  }
  for (int B = 0; B < k; ++B)
    for (int a = 0; a < m; ++a) res[m + flat_fiber_index(0, m, a, B)] -= d.dp(B, a);
  return res;
}

HamResidual hamilton_residual(const HamiltonianSystem& sys, const GridField& field,
                              const GridIndex& node) {
  const int n = sys.n(), m = sys.m(), k = sys.k();
  if (field.side() != Side::Hamiltonian)
    throw Error("hamilton_residual: field must take values in the dual sum");
  if (field.n() != n || field.m() != m || field.k() != k)
    throw DimensionMismatch("hamilton_residual: field shape mismatch");
  if (!field.interior(node)) throw BoundaryNode("hamilton_residual: interior nodes only");

  CoWhitneyPoint here = field.cowhitney_at(node);
  auto d = sys.derivs(here);
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(here.q);
  auto C = sys.algebroid().structure_values(here.q);

  HamResidual out;
  out.q_res.resize(n, k);
  out.p_res = Eigen::VectorXd::Zero(m);

  for (int A = 0; A < k; ++A) {
    Eigen::VectorXd jet = field.fd_jet(node, A);
    for (int i = 0; i < n; ++i) {
      double rhs = 0.0;
      for (int a = 0; a < m; ++a) rhs += rho(i, a) * d.dp(A, a);
      out.q_res(i, A) = jet[i] - rhs;
    }
    for (int a = 0; a < m; ++a)
      out.p_res[a] += jet[flat_fiber_index(n, m, a, A)];
  }

  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    for (int B = 0; B < k; ++B)
      for (int be = 0; be < m; ++be)
        for (int de = 0; de < m; ++de)
          acc += C[static_cast<size_t>(de)](a, be) * here.p(B, de) * d.dp(B, be);
    for (int i = 0; i < n; ++i) acc += rho(i, a) * d.dq[i];
    out.p_res[a] += acc;
  }
  return out;
}

Trajectory integrate_hamilton_k1(const HamiltonianSystem& sys, const CoWhitneyPoint& p0,
                                 double t_end, int steps) {
  if (sys.k() != 1) throw Error("integrate_hamilton_k1: k = 1 systems only");
  if (steps < 1) throw Error("integrate_hamilton_k1: need at least one step");
  const int n = sys.n(), m = sys.m();

  auto rhs = [&sys, n, m](const Eigen::VectorXd& x) {
    CoWhitneyPoint p = unpack_cowhitney(x, n, m, 1);
    auto d = sys.derivs(p);
    Eigen::MatrixXd rho = sys.algebroid().anchor_values(p.q);
    auto C = sys.algebroid().structure_values(p.q);

    Eigen::VectorXd dx(n + m);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a) acc += rho(i, a) * d.dp(0, a);
      dx[i] = acc;
    }
    for (int a = 0; a < m; ++a) {
      double acc = 0.0;
      for (int be = 0; be < m; ++be)
        for (int de = 0; de < m; ++de)
          acc += C[static_cast<size_t>(de)](a, be) * p.p(0, de) * d.dp(0, be);
      for (int i = 0; i < n; ++i) acc += rho(i, a) * d.dq[i];
      dx[n + a] = -acc;
    }
    return dx;
  };

  const double h = t_end / steps;
  Eigen::VectorXd x = pack(p0);

  Trajectory traj;
  traj.t.push_back(0.0);
  traj.points.push_back(p0);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd k1 = rhs(x);
    Eigen::VectorXd k2 = rhs(x + 0.5 * h * k1);
    Eigen::VectorXd k3 = rhs(x + 0.5 * h * k2);
    Eigen::VectorXd k4 = rhs(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.t.push_back((s + 1) * h);
    traj.points.push_back(unpack_cowhitney(x, n, m, 1));
  }
  return traj;
}

}  // namespace afields
