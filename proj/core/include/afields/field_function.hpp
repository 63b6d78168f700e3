#pragma once

#include <functional>
#include <span>

#include "afields/prolongation.hpp"
#include "afields/whitney.hpp"

namespace afields {

/// Scalar function on the k-fold Whitney sum of E (or E*), evaluable with
/// first and second derivatives through jets of the flat [q; fiber] layout.
class FieldFunction {
public:
  using Fn = std::function<ad::Jet(std::span<const ad::Jet>)>;

  FieldFunction() = default;
  FieldFunction(int n, int m, int k, Side domain, Fn f, bool has_hessian = true)
      : n_(n), m_(m), k_(k), domain_(domain), f_(std::move(f)), has_hessian_(has_hessian) {}

  int base_dim() const { return n_; }
  int rank() const { return m_; }
  int slots() const { return k_; }
  Side domain() const { return domain_; }
  int flat_dim() const { return n_ + m_ * k_; }
  bool has_hessian() const { return has_hessian_; }

  ad::Jet eval(std::span<const ad::Jet> x) const { return f_(x); }

  double value(const Eigen::VectorXd& x) const {
    auto xs = ad::Jet::constants(x);
    return f_(xs).value();
  }

  struct Derivs {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;  // empty for first-order bundles
  };

  Derivs derivs1(const Eigen::VectorXd& x) const {
    auto xs = ad::Jet::variables(x);
    ad::Jet r = f_(xs);
    return {r.value(), r.grad(flat_dim()), {}};
  }

  Derivs derivs2(const Eigen::VectorXd& x) const {
    if (!has_hessian_)
      throw Error("FieldFunction: second derivatives not available for this function");
    auto xs = ad::Jet::variables2(x);
    ad::Jet r = f_(xs);
    return {r.value(), r.grad(flat_dim()), r.hess(flat_dim())};
  }

  /// Fallback for opaque user callbacks: derivatives by central differences
  /// (h = 1e-6 for the gradient, nested with h = 1e-4 for the Hessian),
  /// hidden behind the same jet interface.
  static FieldFunction from_plain_callback(int n, int m, int k, Side domain,
                                           std::function<double(const Eigen::VectorXd&)> f);

private:
  int n_ = 0, m_ = 0, k_ = 0;
  Side domain_ = Side::Lagrangian;
  Fn f_;
  bool has_hessian_ = true;
};

/// First-order Taylor composition: given f's value and derivatives with
/// respect to the inputs, chain them against the inputs' own jets. A present
/// Hessian block is chained to second order.
ad::Jet compose_chain(double f0, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                      std::span<const ad::Jet> x);

}  // namespace afields
