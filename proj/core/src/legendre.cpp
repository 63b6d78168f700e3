#include "afields/legendre.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace afields {

namespace {
constexpr double kRegularityThreshold = 1e-10;

Eigen::VectorXd flatten_momenta(const Eigen::MatrixXd& dy) {
  // dy(alpha, A) -> flat A-major vector
  const int m = static_cast<int>(dy.rows());
  const int k = static_cast<int>(dy.cols());
  Eigen::VectorXd out(m * k);
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a) out[A * m + a] = dy(a, A);
  return out;
}

Eigen::VectorXd flatten_comomenta(const Eigen::MatrixXd& p) {
  const int k = static_cast<int>(p.rows());
  const int m = static_cast<int>(p.cols());
  Eigen::VectorXd out(m * k);
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a) out[A * m + a] = p(A, a);
  return out;
}

}  // namespace

LegendreMap::LegendreMap(LagrangianSystem sys, NewtonSettings settings)
    : sys_(std::move(sys)), settings_(settings) {}

CoWhitneyPoint LegendreMap::forward(const WhitneyPoint& b) const {
  auto d = sys_.derivs1(b);
  CoWhitneyPoint p;
  p.q = b.q;
  p.p = d.dy.transpose();
  return p;
}

CoProlongedElement LegendreMap::prolonged(const ProlongedElement& Z) const {
  const int n = sys_.n(), m = sys_.m(), k = sys_.k();
  auto d = sys_.derivs(Z.base);
  Eigen::MatrixXd rho = sys_.algebroid().anchor_values(Z.base.q);

  CoProlongedElement out;
  out.base = forward(Z.base);
  out.z = Z.z;
  out.w.resize(k, m);
  for (int Cs = 0; Cs < k; ++Cs) {
    for (int g = 0; g < m; ++g) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
          acc += Z.z[a] * rho(i, a) * d.d2qy(i, sys_.fiber_flat(g, Cs));
      for (int B = 0; B < k; ++B)
        for (int be = 0; be < m; ++be)
          acc += Z.w(be, B) * d.W(sys_.fiber_flat(g, Cs), sys_.fiber_flat(be, B));
      out.w(Cs, g) = acc;
    }
  }
  return out;
}

LegendreMap::InvertResult LegendreMap::invert(const CoWhitneyPoint& p,
                                              const WhitneyPoint& guess) const {
  const int m = sys_.m(), k = sys_.k();
  const Eigen::VectorXd target = flatten_comomenta(p.p);
  const double tol = settings_.tol * (target.norm() + 1.0);

  WhitneyPoint b;
  b.q = p.q;
  b.y = guess.y;

  auto residual = [&](const WhitneyPoint& pt) {
    auto d1 = sys_.derivs1(pt);
    return Eigen::VectorXd(flatten_momenta(d1.dy) - target);
  };

  Eigen::VectorXd F = residual(b);
  for (int iter = 0; iter < settings_.max_iter; ++iter) {
    if (F.norm() <= tol) return {b, iter};

    auto d = sys_.derivs(b);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.W, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > kRegularityThreshold * smax) || smax == 0.0)
      throw SingularHessian(smin > 0.0 ? smax / smin
                                       : std::numeric_limits<double>::infinity());

    // dL/dy is flattened A-major, matching the Hessian's flat fiber order
    Eigen::VectorXd step = svd.solve(-F);

    double s = 1.0;
    Eigen::VectorXd Fnext;
    WhitneyPoint next = b;
    while (true) {
      next.y = b.y;
      for (int A = 0; A < k; ++A)
        for (int a = 0; a < m; ++a) next.y(a, A) += s * step[A * m + a];
      Fnext = residual(next);
      if (Fnext.norm() < F.norm() || Fnext.norm() <= tol) break;
      s *= 0.5;
      if (s < settings_.min_step) throw NoConvergence(iter, F.norm());
    }
    b = next;
    F = Fnext;
  }
  if (F.norm() <= tol) return {b, settings_.max_iter};
  throw NoConvergence(settings_.max_iter, F.norm());
}

LegendreMap::InvertResult LegendreMap::invert(const CoWhitneyPoint& p) const {
  WhitneyPoint guess;
  guess.q = p.q;
  guess.y = p.p.transpose();
  try {
    return invert(p, guess);
  } catch (const NoConvergence&) {
    guess.y.setZero();
    return invert(p, guess);
  }
}

HamiltonianSystem LegendreMap::induced_hamiltonian() const {
  const int n = sys_.n(), m = sys_.m(), k = sys_.k();
  LegendreMap self = *this;  // owned copy keeps the closure self-contained

  FieldFunction::Fn fn = [self, n, m, k](std::span<const ad::Jet> xs) {
    Eigen::VectorXd x = ad::values(xs);
    CoWhitneyPoint p = unpack_cowhitney(x, n, m, k);
    WhitneyPoint b = self.invert(p).point;
    auto d = self.sys_.derivs1(b);

    double H = (b.y.array() * d.dy.array()).sum() - d.L;  // E_L at the inverse point

    Eigen::VectorXd grad(n + m * k);
    grad.head(n) = -d.dq;
    for (int A = 0; A < k; ++A)
      for (int a = 0; a < m; ++a) grad[flat_fiber_index(n, m, a, A)] = b.y(a, A);
    return compose_chain(H, grad, Eigen::MatrixXd(), xs);
  };

  FieldFunction H(n, m, k, Side::Hamiltonian, std::move(fn), /*has_hessian=*/false);
  return HamiltonianSystem(sys_.algebroid(), k, std::move(H));
}

PullbackCheck pullback_check(const LegendreMap& map, const WhitneyPoint& b,
                             const ProlongedElement& Z1, const ProlongedElement& Z2,
                             double tol) {
  const LagrangianSystem& sys = map.system();
  const int m = sys.m(), k = sys.k();
  const int dim = m + m * k;

  CartanData cd = cartan_sections(sys, b);
  CoWhitneyPoint p = map.forward(b);
  LiouvilleData ld = liouville_sections(sys.algebroid(), k, p);
  CoProlongedElement T1 = map.prolonged(Z1);
  CoProlongedElement T2 = map.prolonged(Z2);

  auto lag_coef = [&](const ProlongedElement& Z) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    c.head(m) = Z.z;
    for (int B = 0; B < k; ++B)
      for (int a = 0; a < m; ++a) c[m + flat_fiber_index(0, m, a, B)] = Z.w(a, B);
    return c;
  };
  auto ham_coef = [&](const CoProlongedElement& Z) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    c.head(m) = Z.z;
    for (int B = 0; B < k; ++B)
      for (int a = 0; a < m; ++a) c[m + flat_fiber_index(0, m, a, B)] = Z.w(B, a);
    return c;
  };

  Eigen::VectorXd c1 = lag_coef(Z1), c2 = lag_coef(Z2);
  Eigen::VectorXd d1 = ham_coef(T1), d2 = ham_coef(T2);

  PullbackCheck out;
  for (int A = 0; A < k; ++A) {
    double thL = cd.theta.row(A).dot(Z1.z);
    double thH = ld.theta.row(A).dot(T1.z);
    out.theta_err = std::max(out.theta_err, std::abs(thL - thH));

    double omL = c1.dot(cd.omega[static_cast<size_t>(A)] * c2);
    double omH = d1.dot(ld.omega[static_cast<size_t>(A)] * d2);
    out.omega_err = std::max(out.omega_err, std::abs(omL - omH));
  }
  out.theta_ok = out.theta_err <= tol;
  out.omega_ok = out.omega_err <= tol;
  return out;
}

TransportResult solution_transport(const LegendreMap& map, const GridField& eta) {
  const LagrangianSystem& sys = map.system();
  const int n = sys.n(), m = sys.m(), k = sys.k();
  if (eta.side() != Side::Lagrangian)
    throw Error("solution_transport: input must be a Lagrangian-side field");

  TransportResult out;
  out.psi = GridField(eta.spec(), n, m, Side::Hamiltonian);
  for (const GridIndex& idx : eta.all_nodes()) {
    CoWhitneyPoint p = map.forward(eta.whitney_at(idx));
    out.psi.at(idx) = pack(p);
  }

  HamiltonianSystem ham = map.induced_hamiltonian();
  for (const GridIndex& idx : eta.interior_nodes()) {
    TransportNodeReport rep;
    rep.node = idx;

    WhitneyPoint b = eta.whitney_at(idx);
    HessianInfo hi = hessian(sys, b);
    rep.regular = hi.regular;

    ElResidual el = euler_lagrange_residual(sys, eta, idx);
    rep.el_res_norm = el.el_linf();

    CoWhitneyPoint p = out.psi.cowhitney_at(idx);
    try {
      rep.invert_iters = map.invert(p).iterations;
      HamResidual hr = hamilton_residual(ham, out.psi, idx);
      rep.ham_res_norm = hr.linf();
    } catch (const Error&) {
      rep.regular = false;
      rep.ham_res_norm = std::numeric_limits<double>::quiet_NaN();
    }

    out.max_el = std::max(out.max_el, rep.el_res_norm);
    if (std::isfinite(rep.ham_res_norm)) out.max_ham = std::max(out.max_ham, rep.ham_res_norm);
    out.nodes.push_back(std::move(rep));
  }
  return out;
}

}  // namespace afields
