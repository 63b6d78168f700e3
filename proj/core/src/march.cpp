#include "afields/march.hpp"

#include <cmath>

namespace afields {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_initial_slice(const GridField& initial, int n, int m) {
  if (initial.k() < 2) throw Error("march: k >= 2 evolutionary problems only");
  if (initial.spec().counts[0] != 1)
    throw Error("march: initial data must live on the t1 = 0 slice (axis0 count 1)");
  for (int a = 1; a < initial.k(); ++a)
    if (!initial.spec().periodic[static_cast<size_t>(a)])
      throw Error("march: non-marching axes must be periodic");
  if (initial.n() != n || initial.m() != m)
    throw DimensionMismatch("march: initial slice shape mismatch");
}

GridSpec extend_spec(const GridField& initial, const MarchParams& prm) {
  GridSpec spec = initial.spec();
  spec.counts[0] = prm.steps + 1;
  spec.h[0] = prm.h1;
  spec.periodic[0] = false;
  return spec;
}

void guard(double v, double max_norm) {
  if (!(std::abs(v) <= max_norm))
    throw UnstableMarch("march diverged (|value| > " + std::to_string(max_norm) + ")");
}

// ---- wave: phi_t1t1 = phi_t2t2 on the standard algebroid, n = m = 1 ----

GridField march_wave(const GridField& initial, const MarchParams& prm) {
  check_initial_slice(initial, 1, 1);
  if (prm.steps < 2) throw Error("march: need at least 2 steps");
  const int N2 = initial.spec().counts[1];
  const double h1 = prm.h1, h2 = initial.spec().h[1];
  const double lam2 = (h1 / h2) * (h1 / h2);

  auto wrap = [N2](int j) { return ((j % N2) + N2) % N2; };

  std::vector<Eigen::VectorXd> phi(static_cast<size_t>(prm.steps + 1),
                                   Eigen::VectorXd::Zero(N2));
  Eigen::VectorXd v0(N2);
  for (int j = 0; j < N2; ++j) {
    GridIndex idx{0, j};
    const Eigen::VectorXd& val = initial.at(idx);
    phi[0][j] = val[0];
    v0[j] = val[flat_fiber_index(1, 1, 0, 0)];  // y1 = phi_t1 at the slice
  }

  auto lap = [&](const Eigen::VectorXd& u, int j) {
    return u[wrap(j + 1)] - 2.0 * u[j] + u[wrap(j - 1)];
  };

  for (int j = 0; j < N2; ++j)
    phi[1][j] = phi[0][j] + h1 * v0[j] + 0.5 * lam2 * lap(phi[0], j);

  for (int s = 1; s < prm.steps; ++s) {
    for (int j = 0; j < N2; ++j) {
      phi[static_cast<size_t>(s + 1)][j] =
          2.0 * phi[static_cast<size_t>(s)][j] - phi[static_cast<size_t>(s - 1)][j] +
          lam2 * lap(phi[static_cast<size_t>(s)], j);
      guard(phi[static_cast<size_t>(s + 1)][j], prm.max_norm);
    }
  }

  GridField out(extend_spec(initial, prm), 1, 1, Side::Lagrangian);
  for (int s = 0; s <= prm.steps; ++s) {
    for (int j = 0; j < N2; ++j) {
      double y1;
      if (s == 0)
        y1 = (-3.0 * phi[0][j] + 4.0 * phi[1][j] - phi[2][j]) / (2.0 * h1);
      else if (s == prm.steps)
        y1 = (3.0 * phi[static_cast<size_t>(s)][j] - 4.0 * phi[static_cast<size_t>(s - 1)][j] +
              phi[static_cast<size_t>(s - 2)][j]) /
             (2.0 * h1);
      else
        y1 = (phi[static_cast<size_t>(s + 1)][j] - phi[static_cast<size_t>(s - 1)][j]) /
             (2.0 * h1);
      double y2 = (phi[static_cast<size_t>(s)][wrap(j + 1)] -
                   phi[static_cast<size_t>(s)][wrap(j - 1)]) /
                  (2.0 * h2);
      GridIndex idx{s, j};
      Eigen::VectorXd v(3);
      v[0] = phi[static_cast<size_t>(s)][j];
      v[flat_fiber_index(1, 1, 0, 0)] = y1;
      v[flat_fiber_index(1, 1, 0, 1)] = y2;
      out.at(idx) = v;
    }
  }
  return out;
}

// ---- Euler-Poincare k = 2: Lorentzian diagonal quadratic form ----

GridField march_euler_poincare(const LagrangianSystem& sys, const GridField& initial,
                               const MarchParams& prm) {
  const int m = sys.m();
  check_initial_slice(initial, 0, m);
  if (sys.k() != 2) throw Error("march: euler-poincare marching needs k = 2");

  // extract the (constant, diagonal) fiber metric s_A I_a from the Hessian
  WhitneyPoint probe = WhitneyPoint::zero(0, m, 2);
  auto W = sys.derivs(probe).W;
  Eigen::MatrixXd sI(m, 2);
  for (int A = 0; A < 2; ++A)
    for (int a = 0; a < m; ++a) sI(a, A) = W(sys.fiber_flat(a, A), sys.fiber_flat(a, A));
  if ((W - [&] {
         Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * m, 2 * m);
         for (int A = 0; A < 2; ++A)
           for (int a = 0; a < m; ++a)
             D(sys.fiber_flat(a, A), sys.fiber_flat(a, A)) = sI(a, A);
         return D;
       }()).cwiseAbs().maxCoeff() > 1e-12)
    throw Error("march: euler-poincare marching expects a diagonal quadratic Lagrangian");

  auto C = sys.algebroid().structure_values(Eigen::VectorXd(0));

  const int N2 = initial.spec().counts[1];
  const double h1 = prm.h1, h2 = initial.spec().h[1];
  auto wrap = [N2](int j) { return ((j % N2) + N2) % N2; };

  using Level = std::vector<Eigen::MatrixXd>;  // per node: m x 2 fiber values
  Level cur(static_cast<size_t>(N2));
  for (int j = 0; j < N2; ++j) cur[static_cast<size_t>(j)] = initial.whitney_at({0, j}).y;

  // time derivative of (y1, y2) at node j given the whole level
  auto rhs = [&](const Level& lv, int j) {
    Eigen::MatrixXd d(m, 2);
    Eigen::VectorXd d2y2(m), d2y1(m);
    for (int a = 0; a < m; ++a) {
      d2y2[a] = (lv[static_cast<size_t>(wrap(j + 1))](a, 1) -
                 lv[static_cast<size_t>(wrap(j - 1))](a, 1)) /
                (2.0 * h2);
      d2y1[a] = (lv[static_cast<size_t>(wrap(j + 1))](a, 0) -
                 lv[static_cast<size_t>(wrap(j - 1))](a, 0)) /
                (2.0 * h2);
    }
    const Eigen::MatrixXd& y = lv[static_cast<size_t>(j)];
    for (int a = 0; a < m; ++a) {
      // momentum balance: d/dt1 (sI1 y1_a) = -d/dt2 (sI2 y2_a) + C-terms
      double R = 0.0;
      for (int be = 0; be < m; ++be)
        for (int g = 0; g < m; ++g)
          for (int Cs = 0; Cs < 2; ++Cs)
            R += y(be, Cs) * C[static_cast<size_t>(g)](be, a) * sI(g, Cs) * y(g, Cs);
      d(a, 0) = (-sI(a, 1) * d2y2[a] + R) / sI(a, 0);
      // flatness: d y2 / dt1 = d y1 / dt2 - C^a_{bg} y^b_1 y^g_2
      double F = 0.0;
      for (int be = 0; be < m; ++be)
        for (int g = 0; g < m; ++g)
          F += C[static_cast<size_t>(a)](be, g) * y(be, 0) * y(g, 1);
      d(a, 1) = d2y1[a] - F;
    }
    return d;
  };

  GridField out(extend_spec(initial, prm), 0, m, Side::Lagrangian);
  auto store = [&](int s, const Level& lv) {
    for (int j = 0; j < N2; ++j) {
      Eigen::VectorXd v(2 * m);
      for (int A = 0; A < 2; ++A)
        for (int a = 0; a < m; ++a) {
          guard(lv[static_cast<size_t>(j)](a, A), prm.max_norm);
          v[flat_fiber_index(0, m, a, A)] = lv[static_cast<size_t>(j)](a, A);
        }
      out.at({s, j}) = v;
    }
  };
  store(0, cur);

  for (int s = 0; s < prm.steps; ++s) {
    // midpoint rule
    Level mid(static_cast<size_t>(N2)), next(static_cast<size_t>(N2));
    for (int j = 0; j < N2; ++j)
      mid[static_cast<size_t>(j)] = cur[static_cast<size_t>(j)] + 0.5 * h1 * rhs(cur, j);
    for (int j = 0; j < N2; ++j)
      next[static_cast<size_t>(j)] = cur[static_cast<size_t>(j)] + h1 * rhs(mid, j);
    cur = std::move(next);
    store(s + 1, cur);
  }
  return out;
}

// ---- sigma model with constant bivector: frozen-p1 gauge ----

GridField march_sigma(const LagrangianSystem& sys, const GridField& initial,
                      const MarchParams& prm) {
  const int n = sys.n();
  check_initial_slice(initial, n, n);
  // constant bivector <=> vanishing structure functions
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(n);
  for (const auto& c : sys.algebroid().structure_values(probe))
    if (c.cwiseAbs().maxCoeff() > 0.0)
      throw Error("march: sigma marching requires a constant bivector");
  Eigen::MatrixXd rho = sys.algebroid().anchor_values(probe);

  const int N2 = initial.spec().counts[1];
  const double h1 = prm.h1, h2 = initial.spec().h[1];
  auto wrap = [N2](int j) { return ((j % N2) + N2) % N2; };

  // state: q and p2 evolve, p1 is the gauge field held at its initial profile
  std::vector<Eigen::VectorXd> q(static_cast<size_t>(N2)), p1(static_cast<size_t>(N2)),
      p2(static_cast<size_t>(N2));
  for (int j = 0; j < N2; ++j) {
    WhitneyPoint b = initial.whitney_at({0, j});
    q[static_cast<size_t>(j)] = b.q;
    p1[static_cast<size_t>(j)] = b.y.col(0);
    p2[static_cast<size_t>(j)] = b.y.col(1);
  }

  GridField out(extend_spec(initial, prm), n, n, Side::Lagrangian);
  auto store = [&](int s) {
    for (int j = 0; j < N2; ++j) {
      Eigen::VectorXd v(n + 2 * n);
      v.head(n) = q[static_cast<size_t>(j)];
      for (int a = 0; a < n; ++a) {
        v[flat_fiber_index(n, n, a, 0)] = p1[static_cast<size_t>(j)][a];
        v[flat_fiber_index(n, n, a, 1)] = p2[static_cast<size_t>(j)][a];
        guard(q[static_cast<size_t>(j)][a], prm.max_norm);
      }
      out.at({s, j}) = v;
    }
  };
  store(0);

  for (int s = 0; s < prm.steps; ++s) {
    // q_t1 = rho p1 (exactly linear under the frozen gauge), p2_t1 = d p1/dt2
    for (int j = 0; j < N2; ++j) {
      Eigen::VectorXd dp1 =
          (p1[static_cast<size_t>(wrap(j + 1))] - p1[static_cast<size_t>(wrap(j - 1))]) /
          (2.0 * h2);
      q[static_cast<size_t>(j)] += h1 * (rho * p1[static_cast<size_t>(j)]);
      p2[static_cast<size_t>(j)] += h1 * dp1;
    }
    store(s + 1);
  }
  return out;
}

}  // namespace

GridField march_evolutionary(const ModelDescriptor& model, const GridField& initial,
                             const MarchParams& prm) {
  if (prm.steps < 1 || prm.h1 <= 0.0) throw Error("march: steps >= 1 and h1 > 0 required");
  if (model.march_tag == "wave") return march_wave(initial, prm);
  if (model.march_tag == "euler-poincare") {
    if (!model.lagrangian) throw Error("march: model carries no Lagrangian");
    return march_euler_poincare(*model.lagrangian, initial, prm);
  }
  if (model.march_tag == "sigma") {
    if (!model.lagrangian) throw Error("march: model carries no Lagrangian");
    return march_sigma(*model.lagrangian, initial, prm);
  }
  throw Error("march: model '" + model.name + "' is not declared evolutionary");
}

GridField wave_exact_field(const GridSpec& spec) {
  GridField out(spec, 1, 1, Side::Lagrangian);
  auto f = [](double u) { return std::sin(kTwoPi * u); };
  auto fp = [](double u) { return kTwoPi * std::cos(kTwoPi * u); };
  auto g = [](double u) { return 0.3 * std::cos(kTwoPi * u); };
  auto gp = [](double u) { return -0.3 * kTwoPi * std::sin(kTwoPi * u); };
  for (const GridIndex& idx : out.all_nodes()) {
    Eigen::VectorXd t = spec.coords(idx);
    Eigen::VectorXd v(3);
    v[0] = f(t[0] + t[1]) + g(t[0] - t[1]);
    v[flat_fiber_index(1, 1, 0, 0)] = fp(t[0] + t[1]) + gp(t[0] - t[1]);
    v[flat_fiber_index(1, 1, 0, 1)] = fp(t[0] + t[1]) - gp(t[0] - t[1]);
    out.at(idx) = v;
  }
  return out;
}

GridField wave_initial_slice(int count2, double h2) {
  GridSpec spec;
  spec.k = 2;
  spec.counts = {1, count2};
  spec.h = {1.0, h2};
  spec.origin = {0.0, 0.0};
  spec.periodic = {false, true};
  GridField slice(spec, 1, 1, Side::Lagrangian);
  GridSpec full = spec;  // sample the exact field on the slice
  GridField exact = wave_exact_field(full);
  for (int j = 0; j < count2; ++j) slice.at({0, j}) = exact.at({0, j});
  return slice;
}

GridField ep_abelian_exact_field(const GridSpec& spec, int m) {
  GridField out(spec, 0, m, Side::Lagrangian);
  for (const GridIndex& idx : out.all_nodes()) {
    Eigen::VectorXd t = spec.coords(idx);
    Eigen::VectorXd v(2 * m);
    for (int a = 0; a < m; ++a) {
      double u = std::sin(kTwoPi * (t[0] + t[1]) + 0.3 * a);
      v[flat_fiber_index(0, m, a, 0)] = u;
      v[flat_fiber_index(0, m, a, 1)] = u;
    }
    out.at(idx) = v;
  }
  return out;
}

GridField ep_initial_slice(int m, int count2, double h2) {
  GridSpec spec;
  spec.k = 2;
  spec.counts = {1, count2};
  spec.h = {1.0, h2};
  spec.origin = {0.0, 0.0};
  spec.periodic = {false, true};
  GridField slice(spec, 0, m, Side::Lagrangian);
  GridField exact = ep_abelian_exact_field(spec, m);
  for (int j = 0; j < count2; ++j) slice.at({0, j}) = exact.at({0, j});
  return slice;
}

GridField sigma_exact_field(const GridSpec& spec, const Eigen::MatrixXd& lambda,
                            const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                            const Eigen::VectorXd& q0) {
  const int n = static_cast<int>(q0.size());
  GridField out(spec, n, n, Side::Lagrangian);
  for (const GridIndex& idx : out.all_nodes()) {
    Eigen::VectorXd t = spec.coords(idx);
    Eigen::VectorXd v(n + 2 * n);
    v.head(n) = q0 - t[0] * (lambda * p1) - t[1] * (lambda * p2);
    for (int a = 0; a < n; ++a) {
      v[flat_fiber_index(n, n, a, 0)] = p1[a];
      v[flat_fiber_index(n, n, a, 1)] = p2[a];
    }
    out.at(idx) = v;
  }
  return out;
}

GridField sigma_initial_slice(const Eigen::MatrixXd& lambda, const Eigen::VectorXd& p1,
                              const Eigen::VectorXd& p2, const Eigen::VectorXd& q0,
                              int count2, double h2) {
  GridSpec spec;
  spec.k = 2;
  spec.counts = {1, count2};
  spec.h = {1.0, h2};
  spec.origin = {0.0, 0.0};
  spec.periodic = {false, true};
  const int n = static_cast<int>(q0.size());
  GridField slice(spec, n, n, Side::Lagrangian);
  GridField exact = sigma_exact_field(spec, lambda, p1, p2, q0);
  for (int j = 0; j < count2; ++j) slice.at({0, j}) = exact.at({0, j});
  return slice;
}

GridResidualNorms el_residual_norms(const LagrangianSystem& sys, const GridField& field) {
  GridResidualNorms out;
  double sum2 = 0.0;
  for (const GridIndex& idx : field.interior_nodes()) {
    ElResidual r = euler_lagrange_residual(sys, field, idx);
    out.el_linf = std::max(out.el_linf, r.el_linf());
    out.morphism_linf = std::max(out.morphism_linf, r.morphism_linf());
    sum2 += r.el_res.squaredNorm();
    ++out.nodes;
  }
  out.el_l2 = out.nodes ? std::sqrt(sum2 / static_cast<double>(out.nodes)) : 0.0;
  return out;
}

HamGridResidualNorms ham_residual_norms(const HamiltonianSystem& sys, const GridField& field) {
  HamGridResidualNorms out;
  double sum2 = 0.0;
  for (const GridIndex& idx : field.interior_nodes()) {
    HamResidual r = hamilton_residual(sys, field, idx);
    out.linf = std::max(out.linf, r.linf());
    sum2 += r.p_res.squaredNorm() + r.q_res.squaredNorm();
    ++out.nodes;
  }
  out.l2 = out.nodes ? std::sqrt(sum2 / static_cast<double>(out.nodes)) : 0.0;
  return out;
}

}  // namespace afields
