#pragma once

#include <random>

#include <afields/afields.hpp>

namespace testutil {

using namespace afields;

inline Eigen::VectorXd rand_vec(std::mt19937& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = U(rng);
  return v;
}

inline Eigen::MatrixXd rand_mat(std::mt19937& rng, int r, int c, double lo = -1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = U(rng);
  return m;
}

inline std::vector<Eigen::VectorXd> rand_points(std::mt19937& rng, int n, int count) {
  std::vector<Eigen::VectorXd> out;
  if (n == 0) {
    out.emplace_back(Eigen::VectorXd(0));
    return out;
  }
  for (int i = 0; i < count; ++i) out.push_back(rand_vec(rng, n));
  return out;
}

inline WhitneyPoint rand_whitney(std::mt19937& rng, int n, int m, int k) {
  return {rand_vec(rng, n), rand_mat(rng, m, k)};
}

inline CoWhitneyPoint rand_cowhitney(std::mt19937& rng, int n, int m, int k) {
  return {rand_vec(rng, n), rand_mat(rng, k, m)};
}

inline ProlongedElement rand_element(std::mt19937& rng, const WhitneyPoint& b) {
  ProlongedElement e;
  e.base = b;
  e.z = rand_vec(rng, b.m());
  e.w = rand_mat(rng, b.m(), b.k());
  return e;
}

/// Lie-Poisson bivector on so(3)*: Lambda^{ij} = eps_{ijk} q^k.
inline std::vector<std::vector<Polynomial>> lie_poisson_so3_table() {
  std::vector<std::vector<Polynomial>> lam(3, std::vector<Polynomial>(3));
  lam[0][1] = Polynomial::coordinate(2);
  lam[1][0] = Polynomial::coordinate(2) * -1.0;
  lam[1][2] = Polynomial::coordinate(0);
  lam[2][1] = Polynomial::coordinate(0) * -1.0;
  lam[2][0] = Polynomial::coordinate(1);
  lam[0][2] = Polynomial::coordinate(1) * -1.0;
  return lam;
}

inline std::vector<std::vector<Polynomial>> symplectic_r2_table() {
  std::vector<std::vector<Polynomial>> lam(2, std::vector<Polynomial>(2));
  lam[0][1] = Polynomial(1.0);
  lam[1][0] = Polynomial(-1.0);
  return lam;
}

/// Smooth random scalar function on the flat coordinates: a positive definite
/// quadratic fiber block (regular Lagrangians) plus polynomial couplings.
inline FieldFunction random_regular_lagrangian(std::mt19937& rng, int n, int m, int k) {
  const int mk = m * k;
  Eigen::MatrixXd A = rand_mat(rng, mk, mk, -0.3, 0.3);
  Eigen::MatrixXd W = A * A.transpose() + Eigen::MatrixXd::Identity(mk, mk);
  Eigen::MatrixXd B = rand_mat(rng, n, mk, -0.5, 0.5);   // q-fiber coupling (linear in q)
  Eigen::VectorXd c = rand_vec(rng, n);                    // potential coefficients
  Eigen::VectorXd d = rand_vec(rng, mk, -0.5, 0.5);        // linear fiber term

  return FieldFunction(
      n, m, k, Side::Lagrangian, [n, mk, W, B, c, d](std::span<const ad::Jet> x) {
        ad::Jet acc(0.0);
        for (int i = 0; i < mk; ++i)
          for (int j = 0; j < mk; ++j)
            acc += 0.5 * W(i, j) * x[static_cast<size_t>(n + i)] * x[static_cast<size_t>(n + j)];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < mk; ++j)
            acc += B(i, j) * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)] *
                   x[static_cast<size_t>(n + j)];
        for (int i = 0; i < n; ++i)
          acc += c[i] * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        for (int j = 0; j < mk; ++j) acc += d[j] * x[static_cast<size_t>(n + j)];
        return acc;
      });
}

/// Random polynomial Hamiltonian (no regularity requirement).
inline FieldFunction random_hamiltonian(std::mt19937& rng, int n, int m, int k) {
  const int dim = n + m * k;
  Eigen::MatrixXd Q = rand_mat(rng, dim, dim, -0.4, 0.4);
  Eigen::VectorXd l = rand_vec(rng, dim);
  return FieldFunction(n, m, k, Side::Hamiltonian, [dim, Q, l](std::span<const ad::Jet> x) {
    ad::Jet acc(0.0);
    for (int i = 0; i < dim; ++i) {
      acc += l[i] * x[static_cast<size_t>(i)];
      for (int j = 0; j < dim; ++j)
        acc += 0.5 * Q(i, j) * x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)];
    }
    return acc;
  });
}

/// Atiyah model used across the tests: SO(3) over R^2 with a polynomial
/// connection.
inline LieAlgebroid atiyah_so3_r2() {
  std::vector<std::vector<Polynomial>> A(3, std::vector<Polynomial>(2));
  A[0][0] = Polynomial::coordinate(0);           // A^1_1 = q1
  A[0][1] = Polynomial(0.5);                     // A^1_2 = 1/2
  A[1][0] = Polynomial::coordinate(1) * 0.7;     // A^2_1 = 0.7 q2
  A[1][1] = Polynomial::coordinate(0) * -0.3;    // A^2_2 = -0.3 q1
  Polynomial p12;                                // A^3_1 = q1 q2
  p12.add_term(1.0, {1, 1});
  A[2][0] = p12;
  A[2][1] = Polynomial(0.0);
  return atiyah_trivial(2, so3_structure_constants(), A);
}

}  // namespace testutil
