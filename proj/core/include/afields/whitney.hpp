#pragma once

#include <Eigen/Dense>

#include "afields/errors.hpp"

namespace afields {

/// Which of the two Whitney sums an object lives over.
enum class Side { Lagrangian, Hamiltonian };

/// Point of the k-fold Whitney sum of E: base coordinates q and fiber
/// coordinates y(alpha, A) for the A-th summand.
struct WhitneyPoint {
  Eigen::VectorXd q;  // n
  Eigen::MatrixXd y;  // m x k

  WhitneyPoint() = default;
  WhitneyPoint(Eigen::VectorXd q_, Eigen::MatrixXd y_)
      : q(std::move(q_)), y(std::move(y_)) {}

  int n() const { return static_cast<int>(q.size()); }
  int m() const { return static_cast<int>(y.rows()); }
  int k() const { return static_cast<int>(y.cols()); }

  static WhitneyPoint zero(int n, int m, int k) {
    return {Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(m, k)};
  }
};

/// Point of the k-fold Whitney sum of E*: momenta p(A, alpha).
struct CoWhitneyPoint {
  Eigen::VectorXd q;  // n
  Eigen::MatrixXd p;  // k x m

  CoWhitneyPoint() = default;
  CoWhitneyPoint(Eigen::VectorXd q_, Eigen::MatrixXd p_)
      : q(std::move(q_)), p(std::move(p_)) {}

  int n() const { return static_cast<int>(q.size()); }
  int m() const { return static_cast<int>(p.cols()); }
  int k() const { return static_cast<int>(p.rows()); }

  static CoWhitneyPoint zero(int n, int m, int k) {
    return {Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(k, m)};
  }
};

/// Flat coordinate layout shared by all evaluations: [q; fiber], with the
/// fiber flattened A-major so that slot A occupies indices n + A*m .. n + A*m + m - 1.
inline int flat_fiber_index(int n, int m, int alpha, int A) { return n + A * m + alpha; }

inline Eigen::VectorXd pack(const WhitneyPoint& b) {
  Eigen::VectorXd x(b.n() + b.m() * b.k());
  x.head(b.n()) = b.q;
  for (int A = 0; A < b.k(); ++A)
    for (int a = 0; a < b.m(); ++a) x[flat_fiber_index(b.n(), b.m(), a, A)] = b.y(a, A);
  return x;
}

inline Eigen::VectorXd pack(const CoWhitneyPoint& p) {
  Eigen::VectorXd x(p.n() + p.m() * p.k());
  x.head(p.n()) = p.q;
  for (int A = 0; A < p.k(); ++A)
    for (int a = 0; a < p.m(); ++a) x[flat_fiber_index(p.n(), p.m(), a, A)] = p.p(A, a);
  return x;
}

inline WhitneyPoint unpack_whitney(const Eigen::VectorXd& x, int n, int m, int k) {
  if (x.size() != n + m * k) throw DimensionMismatch("unpack_whitney: bad length");
  WhitneyPoint b;
  b.q = x.head(n);
  b.y.resize(m, k);
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a) b.y(a, A) = x[flat_fiber_index(n, m, a, A)];
  return b;
}

inline CoWhitneyPoint unpack_cowhitney(const Eigen::VectorXd& x, int n, int m, int k) {
  if (x.size() != n + m * k) throw DimensionMismatch("unpack_cowhitney: bad length");
  CoWhitneyPoint p;
  p.q = x.head(n);
  p.p.resize(k, m);
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a) p.p(A, a) = x[flat_fiber_index(n, m, a, A)];
  return p;
}

/// Element of the prolongation over the Whitney sum, in the basis
/// {X_alpha, V(alpha, A)}: z on the X part, w(alpha, A) on the vertical part.
/// The admissibility pairing with a tangent vector is rebuilt from the anchor,
/// so (z, w) coefficients always describe a genuine element.
struct ProlongedElement {
  WhitneyPoint base;
  Eigen::VectorXd z;  // m
  Eigen::MatrixXd w;  // m x k

  static ProlongedElement zero(const WhitneyPoint& b) {
    ProlongedElement e;
    e.base = b;
    e.z = Eigen::VectorXd::Zero(b.m());
    e.w = Eigen::MatrixXd::Zero(b.m(), b.k());
    return e;
  }
};

/// Same thing over the dual Whitney sum; w(A, alpha) multiplies V(A, alpha).
struct CoProlongedElement {
  CoWhitneyPoint base;
  Eigen::VectorXd z;  // m
  Eigen::MatrixXd w;  // k x m

  static CoProlongedElement zero(const CoWhitneyPoint& p) {
    CoProlongedElement e;
    e.base = p;
    e.z = Eigen::VectorXd::Zero(p.m());
    e.w = Eigen::MatrixXd::Zero(p.k(), p.m());
    return e;
  }
};

}  // namespace afields
