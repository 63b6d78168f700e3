#pragma once

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "afields/jet.hpp"

namespace afields {

/// Multivariate polynomial as an explicit monomial list.
///
/// This is the whole expression language for user-supplied coefficient
/// fields: anchors, structure functions and bivectors are polynomial
/// tables in the base coordinates, everything else is a builtin closure.
class Polynomial {
public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> exponents;  // one entry per base coordinate
  };

  Polynomial() = default;
  explicit Polynomial(double constant) {
    if (constant != 0.0) terms_.push_back({constant, {}});
  }
  explicit Polynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static Polynomial constant(double c) { return Polynomial(c); }

  /// The coordinate monomial q_i.
  static Polynomial coordinate(int i) {
    Term t;
    t.coeff = 1.0;
    t.exponents.assign(i + 1, 0);
    t.exponents[i] = 1;
    return Polynomial(std::vector<Term>{t});
  }

  void add_term(double coeff, std::vector<int> exponents) {
    terms_.push_back({coeff, std::move(exponents)});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  template <class Scalar>
  Scalar operator()(std::span<const Scalar> q) const {
    Scalar acc(0.0);
    for (const Term& t : terms_) {
      Scalar mono(t.coeff);
      for (size_t i = 0; i < t.exponents.size(); ++i) {
        if (t.exponents[i] == 0) continue;
        mono *= pow_impl(q[i], t.exponents[i]);
      }
      acc += mono;
    }
    return acc;
  }

  double eval(const Eigen::VectorXd& q) const {
    double acc = 0.0;
    for (const Term& t : terms_) {
      double mono = t.coeff;
      for (size_t i = 0; i < t.exponents.size(); ++i) {
        for (int e = 0; e < t.exponents[i]; ++e) mono *= q[static_cast<int>(i)];
      }
      acc += mono;
    }
    return acc;
  }

  ad::Jet eval(std::span<const ad::Jet> q) const { return (*this)(q); }

  /// d/dq_i, exact.
  Polynomial derivative(int i) const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
      if (static_cast<size_t>(i) >= t.exponents.size() || t.exponents[i] == 0) continue;
      Term d = t;
      d.coeff *= t.exponents[i];
      d.exponents[i] -= 1;
      out.push_back(std::move(d));
    }
    return Polynomial(std::move(out));
  }

  Polynomial operator*(double s) const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.coeff *= s;
    return Polynomial(std::move(out));
  }

private:
  template <class Scalar>
  static Scalar pow_impl(const Scalar& x, int e) {
    Scalar out = x;
    for (int i = 1; i < e; ++i) out *= x;
    return out;
  }

  std::vector<Term> terms_;
};

}  // namespace afields
