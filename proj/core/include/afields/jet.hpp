#pragma once

#include <cassert>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace afields::ad {

/// Forward-mode scalar carrying value, gradient and (optionally) Hessian
/// with respect to a fixed set of seed variables.
///
/// An empty gradient/Hessian stands for "identically zero"; constants stay
/// cheap and mix freely with seeded variables. Whenever one operand carries
/// a Hessian the result does too, so an expression built from variables2()
/// seeds propagates exact second derivatives.
class Jet {
public:
  Jet() = default;
  Jet(double value) : v_(value) {}
  Jet(double value, Eigen::VectorXd grad) : v_(value), g_(std::move(grad)) {}
  Jet(double value, Eigen::VectorXd grad, Eigen::MatrixXd hess)
      : v_(value), g_(std::move(grad)), h_(std::move(hess)) {}

  /// Seed the i-th of n first-order variables.
  static Jet variable(double value, int i, int n) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    g[i] = 1.0;
    return Jet(value, std::move(g));
  }

  /// Seed the i-th of n second-order variables (zero Hessian block).
  static Jet variable2(double value, int i, int n) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    g[i] = 1.0;
    return Jet(value, std::move(g), Eigen::MatrixXd::Zero(n, n));
  }

  /// Seed a full coordinate vector at order 1.
  static std::vector<Jet> variables(const Eigen::VectorXd& x) {
    std::vector<Jet> out;
    out.reserve(static_cast<size_t>(x.size()));
    for (int i = 0; i < x.size(); ++i)
      out.push_back(variable(x[i], i, static_cast<int>(x.size())));
    return out;
  }

  /// Seed a full coordinate vector at order 2.
  static std::vector<Jet> variables2(const Eigen::VectorXd& x) {
    std::vector<Jet> out;
    out.reserve(static_cast<size_t>(x.size()));
    for (int i = 0; i < x.size(); ++i)
      out.push_back(variable2(x[i], i, static_cast<int>(x.size())));
    return out;
  }

  /// Lift a plain vector to constant jets.
  static std::vector<Jet> constants(const Eigen::VectorXd& x) {
    return std::vector<Jet>(x.begin(), x.end());
  }

  double value() const { return v_; }
  bool has_grad() const { return g_.size() > 0; }
  bool has_hess() const { return h_.size() > 0; }
  int dim() const { return static_cast<int>(g_.size()); }

  /// Gradient as a dense vector of dimension n (zero-filled if constant).
  Eigen::VectorXd grad(int n) const {
    if (g_.size() > 0) return g_;
    return Eigen::VectorXd::Zero(n);
  }

  /// Hessian as a dense matrix (zero-filled if absent).
  Eigen::MatrixXd hess(int n) const {
    if (h_.size() > 0) return h_;
    return Eigen::MatrixXd::Zero(n, n);
  }

  const Eigen::VectorXd& raw_grad() const { return g_; }
  const Eigen::MatrixXd& raw_hess() const { return h_; }

  Jet operator-() const {
    Jet r(-v_);
    if (g_.size()) r.g_ = -g_;
    if (h_.size()) r.h_ = -h_;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.v_ + b.v_);
    r.g_ = add_vec(a.g_, b.g_);
    r.h_ = add_mat(a.h_, b.h_);
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.v_ - b.v_);
    r.g_ = add_vec(a.g_, b.g_, -1.0);
    r.h_ = add_mat(a.h_, b.h_, -1.0);
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v_ * b.v_);
    r.g_ = add_vec(scale_vec(a.g_, b.v_), b.g_, a.v_);
    Eigen::MatrixXd h = add_mat(scale_mat(a.h_, b.v_), b.h_, a.v_);
    if (a.g_.size() && b.g_.size()) {
      Eigen::MatrixXd cross = a.g_ * b.g_.transpose();
      cross += cross.transpose().eval();
      h = add_mat(h, cross);
    }
    // a*b needs a Hessian whenever either operand tracks one
    if (h.size() == 0 && (a.h_.size() || b.h_.size())) {
      int n = std::max<int>(static_cast<int>(a.g_.size()), static_cast<int>(b.g_.size()));
      h = Eigen::MatrixXd::Zero(n, n);
    }
    r.h_ = std::move(h);
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    return a * unary(b, 1.0 / b.v_, -1.0 / (b.v_ * b.v_), 2.0 / (b.v_ * b.v_ * b.v_));
  }

  friend Jet operator+(const Jet& a, double s) { return a + Jet(s); }
  friend Jet operator+(double s, const Jet& a) { return Jet(s) + a; }
  friend Jet operator-(const Jet& a, double s) { return a - Jet(s); }
  friend Jet operator-(double s, const Jet& a) { return Jet(s) - a; }
  friend Jet operator*(const Jet& a, double s) { return a * Jet(s); }
  friend Jet operator*(double s, const Jet& a) { return Jet(s) * a; }
  friend Jet operator/(const Jet& a, double s) { return a * Jet(1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

  Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
  Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
  Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }

  /// Chain rule for a scalar function with given value and derivatives at v_.
  static Jet unary(const Jet& x, double f, double df, double d2f) {
    Jet r(f);
    r.g_ = scale_vec(x.g_, df);
    Eigen::MatrixXd h = scale_mat(x.h_, df);
    if (x.g_.size()) {
      Eigen::MatrixXd outer = d2f * (x.g_ * x.g_.transpose());
      h = add_mat(h, outer);
    }
    if (h.size() == 0 && x.h_.size()) h = Eigen::MatrixXd::Zero(x.g_.size(), x.g_.size());
    r.h_ = std::move(h);
    return r;
  }

private:
  static Eigen::VectorXd add_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 double s = 1.0) {
    if (a.size() == 0 && b.size() == 0) return {};
    if (a.size() == 0) return s * b;
    if (b.size() == 0) return a;
    assert(a.size() == b.size());
    return a + s * b;
  }
  static Eigen::MatrixXd add_mat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 double s = 1.0) {
    if (a.size() == 0 && b.size() == 0) return {};
    if (a.size() == 0) return s * b;
    if (b.size() == 0) return a;
    assert(a.rows() == b.rows());
    return a + s * b;
  }
  static Eigen::VectorXd scale_vec(const Eigen::VectorXd& a, double s) {
    if (a.size() == 0) return {};
    return s * a;
  }
  static Eigen::MatrixXd scale_mat(const Eigen::MatrixXd& a, double s) {
    if (a.size() == 0) return {};
    return s * a;
  }

  double v_ = 0.0;
  Eigen::VectorXd g_;
  Eigen::MatrixXd h_;
};

inline Jet sin(const Jet& x) {
  return Jet::unary(x, std::sin(x.value()), std::cos(x.value()), -std::sin(x.value()));
}
inline Jet cos(const Jet& x) {
  return Jet::unary(x, std::cos(x.value()), -std::sin(x.value()), -std::cos(x.value()));
}
inline Jet exp(const Jet& x) {
  double e = std::exp(x.value());
  return Jet::unary(x, e, e, e);
}
inline Jet log(const Jet& x) {
  double v = x.value();
  return Jet::unary(x, std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet sqrt(const Jet& x) {
  double s = std::sqrt(x.value());
  return Jet::unary(x, s, 0.5 / s, -0.25 / (s * s * s));
}
inline Jet pow(const Jet& x, int e) {
  if (e == 0) return Jet(1.0);
  if (e == 1) return x;
  double v = x.value();
  double f = std::pow(v, e);
  double df = e * std::pow(v, e - 1);
  double d2f = (e > 1) ? e * (e - 1) * std::pow(v, e - 2) : 0.0;
  if (e < 0) d2f = e * (e - 1) * std::pow(v, e - 2);
  return Jet::unary(x, f, df, d2f);
}

/// First partial of an order-2 jet as an order-1 jet (differentiate-through).
inline Jet partial(const Jet& f, int i) {
  if (!f.has_grad()) return Jet(0.0);
  double v = f.raw_grad()[i];
  if (!f.has_hess()) return Jet(v);
  return Jet(v, f.raw_hess().row(i).transpose());
}

/// Extract plain values from a jet span.
inline Eigen::VectorXd values(std::span<const Jet> xs) {
  Eigen::VectorXd out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[static_cast<int>(i)] = xs[i].value();
  return out;
}

}  // namespace afields::ad
