#include <doctest.h>

#include "helpers.hpp"

using namespace afields;
using testutil::rand_cowhitney;
using testutil::rand_vec;

namespace {

HamiltonianSystem free_hamiltonian(int n, int k) {
  // H = 1/2 sum (p^A_alpha)^2 on the standard algebroid
  return HamiltonianSystem(
      standard_algebroid(n), k,
      FieldFunction(n, n, k, Side::Hamiltonian, [n, k](std::span<const ad::Jet> x) {
        ad::Jet acc(0.0);
        for (int A = 0; A < k; ++A)
          for (int a = 0; a < n; ++a) {
            const ad::Jet& p = x[static_cast<size_t>(flat_fiber_index(n, n, a, A))];
            acc += 0.5 * p * p;
          }
        return acc;
      }));
}

HamiltonianSystem so3_kinetic(const Eigen::Vector3d& I) {
  return HamiltonianSystem(
      so3_algebroid(), 1,
      FieldFunction(0, 3, 1, Side::Hamiltonian, [I](std::span<const ad::Jet> x) {
        ad::Jet acc(0.0);
        for (int a = 0; a < 3; ++a) acc += 0.5 / I[a] * x[static_cast<size_t>(a)] * x[static_cast<size_t>(a)];
        return acc;
      }));
}

}  // namespace

TEST_CASE("Liouville 2-sections on the standard algebroid are the canonical pairing") {
  std::mt19937 rng(50);
  LieAlgebroid alg = standard_algebroid(2);
  CoWhitneyPoint p = rand_cowhitney(rng, 2, 2, 2);
  LiouvilleData ld = liouville_sections(alg, 2, p);
  const int m = 2, k = 2;
  for (int A = 0; A < k; ++A) {
    const Eigen::MatrixXd& O = ld.omega[static_cast<size_t>(A)];
    CHECK(O.topLeftCorner(m, m).cwiseAbs().maxCoeff() == 0.0);  // C = 0
    for (int be = 0; be < m; ++be)
      for (int B = 0; B < k; ++B)
        for (int g = 0; g < m; ++g)
          CHECK(O(be, m + flat_fiber_index(0, m, g, B)) ==
                doctest::Approx((be == g && A == B) ? 1.0 : 0.0));
    CHECK((O + O.transpose()).cwiseAbs().maxCoeff() == 0.0);  // antisymmetry
  }
}

TEST_CASE("Liouville sections vanish at the zero momentum point") {
  LieAlgebroid alg = so3_algebroid();
  CoWhitneyPoint p = CoWhitneyPoint::zero(0, 3, 2);
  LiouvilleData ld = liouville_sections(alg, 2, p);
  CHECK(ld.theta.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& O : ld.omega)
    CHECK(O.topLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Liouville X-X block on so(3) at a unit momentum") {
  LieAlgebroid alg = so3_algebroid();
  CoWhitneyPoint p = CoWhitneyPoint::zero(0, 3, 2);
  p.p(0, 2) = 1.0;  // slot 1 momentum along the third axis
  LiouvilleData ld = liouville_sections(alg, 2, p);
  auto eps = so3_structure_constants();
  for (int be = 0; be < 3; ++be)
    for (int g = 0; g < 3; ++g) {
      CHECK(ld.omega[0](be, g) == doctest::Approx(eps[2](be, g)));
      CHECK(ld.omega[1](be, g) == doctest::Approx(0.0));
    }
}

TEST_CASE("solve_hamilton_section on the free standard system") {
  std::mt19937 rng(51);
  HamiltonianSystem sys = free_hamiltonian(1, 2);
  CoWhitneyPoint p = rand_cowhitney(rng, 1, 1, 2);
  HamSectionValue v = solve_hamilton_section(sys, p);
  for (int B = 0; B < 2; ++B) CHECK(v.xi(0, B) == doctest::Approx(p.p(B, 0)));
  for (const auto& w : v.w) CHECK(w.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("trace gauge distributes the constraint equally") {
  std::mt19937 rng(52);
  // q-independent H on so(3): trace rhs = -C^d_{ab} p_d dH_b
  HamiltonianSystem sys(so3_algebroid(), 2,
                        FieldFunction(0, 3, 2, Side::Hamiltonian,
                                      [](std::span<const ad::Jet> x) {
                                        ad::Jet acc(0.0);
                                        for (int i = 0; i < 6; ++i)
                                          acc += 0.5 * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
                                        return acc;
                                      }));
  CoWhitneyPoint p = rand_cowhitney(rng, 0, 3, 2);
  HamSectionValue v = solve_hamilton_section(sys, p);
  auto d = sys.derivs(p);
  auto C = so3_structure_constants();
  for (int a = 0; a < 3; ++a) {
    double rhs = 0.0;
    for (int Cs = 0; Cs < 2; ++Cs)
      for (int be = 0; be < 3; ++be)
        for (int de = 0; de < 3; ++de)
          rhs -= C[static_cast<size_t>(de)](a, be) * p.p(Cs, de) * d.dp(Cs, be);
    for (int A = 0; A < 2; ++A) {
      for (int B = 0; B < 2; ++B) {
        if (A == B)
          CHECK(v.w[static_cast<size_t>(A)](B, a) == doctest::Approx(rhs / 2.0));
        else
          CHECK(v.w[static_cast<size_t>(A)](B, a) == 0.0);
      }
    }
  }
}

TEST_CASE("solved sections close the geometric Hamilton equation on the zoo") {
  std::mt19937 rng(53);
  std::vector<LieAlgebroid> algs;
  algs.push_back(standard_algebroid(2));
  algs.push_back(so3_algebroid());
  algs.push_back(poisson_cotangent_algebroid(testutil::lie_poisson_so3_table(), 3));
  algs.push_back(testutil::atiyah_so3_r2());
  for (const auto& alg : algs) {
    for (int k : {1, 2}) {
      FieldFunction H = testutil::random_hamiltonian(rng, alg.base_dim(), alg.rank(), k);
      HamiltonianSystem sys(alg, k, H);
      for (int rep = 0; rep < 25; ++rep) {
        CoWhitneyPoint p = rand_cowhitney(rng, alg.base_dim(), alg.rank(), k);
        HamSectionValue v = solve_hamilton_section(sys, p);
        Eigen::VectorXd res = hamilton_geometric_residual(sys, v, p);
        CHECK(res.cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }
}

TEST_CASE("hamilton_residual vanishes on the free-particle trajectory") {
  HamiltonianSystem sys = free_hamiltonian(1, 1);
  const double q0 = 0.2, p0 = 0.7, h = 0.01;
  GridSpec spec;
  spec.k = 1;
  spec.counts = {101};
  spec.h = {h};
  spec.origin = {0.0};
  spec.periodic = {false};
  GridField psi(spec, 1, 1, Side::Hamiltonian);
  for (int j = 0; j <= 100; ++j) {
    Eigen::VectorXd v(2);
    v << q0 + p0 * (j * h), p0;
    psi.at({j}) = v;
  }
  for (int j : {1, 50, 99}) {
    HamResidual r = hamilton_residual(sys, psi, {j});
    CHECK(r.linf() <= 1e-12);
  }
}

TEST_CASE("standard-case residual matches the classical Hamilton operator") {
  std::mt19937 rng(54);
  const int n = 2, k = 2;
  LieAlgebroid alg = standard_algebroid(n);
  FieldFunction H = testutil::random_hamiltonian(rng, n, n, k);
  HamiltonianSystem sys(alg, k, H);

  GridSpec spec = GridSpec::uniform(2, 6, 0.07);
  GridField psi(spec, n, n, Side::Hamiltonian);
  for (long f = 0; f < psi.num_nodes(); ++f) psi.at_flat(f) = rand_vec(rng, n + n * k);

  for (int rep = 0; rep < 10; ++rep) {
    GridIndex node{1 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 4)};
    HamResidual r = hamilton_residual(sys, psi, node);

    auto d = H.derivs1(psi.at(node));
    // classical operator: dq^i/dt^A - dH/dp^A_i and sum_A dp^A_i/dt^A + dH/dq^i
    for (int A = 0; A < k; ++A) {
      Eigen::VectorXd jet = psi.fd_jet(node, A);
      for (int i = 0; i < n; ++i) {
        double classical = jet[i] - d.grad[flat_fiber_index(n, n, i, A)];
        CHECK(r.q_res(i, A) == doctest::Approx(classical).epsilon(1e-12));
      }
    }
    for (int i = 0; i < n; ++i) {
      double classical = d.grad[i];
      for (int A = 0; A < k; ++A) classical += psi.fd_jet(node, A)[flat_fiber_index(n, n, i, A)];
      CHECK(r.p_res[i] == doctest::Approx(classical).epsilon(1e-12));
    }
  }
}

TEST_CASE("manufactured dual-side sigma field solves the Hamilton equations exactly") {
  // constant symplectic bivector; H = c . p + b . q integrates to linear fields
  std::mt19937 rng(55);
  LieAlgebroid alg = poisson_cotangent_algebroid(testutil::symplectic_r2_table(), 2);
  const int n = 2, k = 2;
  Eigen::MatrixXd c = testutil::rand_mat(rng, k, n);
  Eigen::VectorXd bq = rand_vec(rng, n);
  HamiltonianSystem sys(
      alg, k,
      FieldFunction(n, n, k, Side::Hamiltonian, [n, k, c, bq](std::span<const ad::Jet> x) {
        ad::Jet acc(0.0);
        for (int i = 0; i < n; ++i) acc += bq[i] * x[static_cast<size_t>(i)];
        for (int A = 0; A < k; ++A)
          for (int a = 0; a < n; ++a)
            acc += c(A, a) * x[static_cast<size_t>(flat_fiber_index(n, n, a, A))];
        return acc;
      }));

  Eigen::MatrixXd rho = alg.anchor_values(Eigen::VectorXd::Zero(n));
  // q(t) = q0 + sum_A (rho c_A) t^A ; p^1(t) = -(rho^T bq) t^1 ; p^2 = const
  Eigen::VectorXd q0 = rand_vec(rng, n);
  Eigen::VectorXd slope1 = -(rho.transpose() * bq);
  GridSpec spec = GridSpec::uniform(2, 6, 0.05);
  GridField psi(spec, n, n, Side::Hamiltonian);
  for (long f = 0; f < psi.num_nodes(); ++f) {
    GridIndex idx = psi.unflat(f);
    Eigen::VectorXd t = spec.coords(idx);
    Eigen::VectorXd v(n + n * k);
    Eigen::VectorXd q = q0;
    for (int A = 0; A < k; ++A) q += (rho * c.row(A).transpose()) * t[A];
    v.head(n) = q;
    for (int a = 0; a < n; ++a) {
      v[flat_fiber_index(n, n, a, 0)] = slope1[a] * t[0];
      v[flat_fiber_index(n, n, a, 1)] = 0.3;
    }
    psi.at_flat(f) = v;
  }
  for (const GridIndex& idx : psi.interior_nodes()) {
    HamResidual r = hamilton_residual(sys, psi, idx);
    CHECK(r.linf() <= 1e-12);
  }
}

TEST_CASE("k = 1 integrator reproduces the free flow") {
  HamiltonianSystem sys = free_hamiltonian(1, 1);
  CoWhitneyPoint p0 = CoWhitneyPoint::zero(1, 1, 1);
  p0.p(0, 0) = 1.0;
  Trajectory tr = integrate_hamilton_k1(sys, p0, 1.0, 100);
  CHECK(std::abs(tr.points.back().q[0] - 1.0) <= 1e-8);
  CHECK(std::abs(tr.points.back().p(0, 0) - 1.0) <= 1e-12);
}

TEST_CASE("k = 1 integrator conserves the so(3)* Casimir and the energy") {
  HamiltonianSystem sys = so3_kinetic(Eigen::Vector3d(1.0, 2.0, 3.0));
  CoWhitneyPoint p0 = CoWhitneyPoint::zero(0, 3, 1);
  p0.p << 1.0, 0.6, -0.4;
  Trajectory tr = integrate_hamilton_k1(sys, p0, 10.0, 10000);
  const double cas0 = p0.p.squaredNorm();
  const double e0 = sys.derivs(p0).H;
  double worst_cas = 0.0, worst_e = 0.0;
  for (const auto& pt : tr.points) {
    worst_cas = std::max(worst_cas, std::abs(pt.p.squaredNorm() - cas0) / cas0);
    worst_e = std::max(worst_e, std::abs(sys.derivs(pt).H - e0) / std::abs(e0));
  }
  CHECK(worst_cas <= 1e-8);
  CHECK(worst_e <= 1e-8);
}

TEST_CASE("k = 1 integrator keeps a zero Hamiltonian trajectory constant") {
  HamiltonianSystem sys(so3_algebroid(), 1,
                        FieldFunction(0, 3, 1, Side::Hamiltonian,
                                      [](std::span<const ad::Jet>) { return ad::Jet(0.0); }));
  CoWhitneyPoint p0 = CoWhitneyPoint::zero(0, 3, 1);
  p0.p << 0.3, -0.1, 0.8;
  Trajectory tr = integrate_hamilton_k1(sys, p0, 5.0, 50);
  for (const auto& pt : tr.points)
    CHECK((pt.p - p0.p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("k != 1 is rejected by the integrator") {
  HamiltonianSystem sys = free_hamiltonian(1, 2);
  CHECK_THROWS_AS(integrate_hamilton_k1(sys, CoWhitneyPoint::zero(1, 1, 2), 1.0, 10), Error);
}

TEST_CASE("exact dual-side solutions converge at order 2 under refinement") {
  // rotate momenta with a q-dependent Hamiltonian on the standard algebroid
  HamiltonianSystem sys(
      standard_algebroid(1), 1,
      FieldFunction(1, 1, 1, Side::Hamiltonian, [](std::span<const ad::Jet> x) {
        return 0.5 * x[1] * x[1] + 0.5 * x[0] * x[0];  // harmonic oscillator
      }));
  auto residual_at = [&](double h) {
    int N = static_cast<int>(std::lround(2.0 / h)) + 1;
    GridSpec spec;
    spec.k = 1;
    spec.counts = {N};
    spec.h = {h};
    spec.origin = {0.0};
    spec.periodic = {false};
    GridField psi(spec, 1, 1, Side::Hamiltonian);
    for (int j = 0; j < N; ++j) {
      double t = j * h;
      Eigen::VectorXd v(2);
      v << std::sin(t), std::cos(t);
      psi.at({j}) = v;
    }
    return ham_residual_norms(sys, psi).linf;
  };
  auto rep = convergence_study({0.02, 0.01, 0.005}, residual_at);
  CHECK(rep.fitted_order == doctest::Approx(2.0).epsilon(0.1));
}
