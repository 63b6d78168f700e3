#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "afields/jet.hpp"
#include "afields/poly.hpp"

namespace afields {

/// Dense matrix of jets (row-major), the working currency for anchor fields.
struct JetMat {
  int rows = 0, cols = 0;
  std::vector<ad::Jet> v;

  JetMat() = default;
  JetMat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c) {}

  ad::Jet& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
  const ad::Jet& at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }

  Eigen::MatrixXd values() const {
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out(i, j) = at(i, j).value();
    return out;
  }
};

/// Rank-3 tensor of jets; structure functions are stored as C(gamma, alpha, beta).
struct JetTen3 {
  int d0 = 0, d1 = 0, d2 = 0;
  std::vector<ad::Jet> v;

  JetTen3() = default;
  JetTen3(int a, int b, int c) : d0(a), d1(b), d2(c), v(static_cast<size_t>(a) * b * c) {}

  ad::Jet& at(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * d1 + j) * d2 + k];
  }
  const ad::Jet& at(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * d1 + j) * d2 + k];
  }
};

/// Smooth map q -> matrix, evaluable on jets of the base coordinates.
using MatrixField = std::function<JetMat(std::span<const ad::Jet>)>;

/// Smooth map q -> rank-3 tensor, evaluable on jets of the base coordinates.
using Tensor3Field = std::function<JetTen3(std::span<const ad::Jet>)>;

/// Smooth map q -> vector (e.g. section coefficients).
using VectorField = std::function<std::vector<ad::Jet>(std::span<const ad::Jet>)>;

/// Smooth scalar q -> R.
using ScalarField = std::function<ad::Jet(std::span<const ad::Jet>)>;

inline MatrixField constant_matrix_field(const Eigen::MatrixXd& m) {
  return [m](std::span<const ad::Jet>) {
    JetMat out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < out.rows; ++i)
      for (int j = 0; j < out.cols; ++j) out.at(i, j) = ad::Jet(m(i, j));
    return out;
  };
}

inline Tensor3Field constant_tensor3_field(int d0, int d1, int d2, std::vector<double> vals) {
  return [=](std::span<const ad::Jet>) {
    JetTen3 out(d0, d1, d2);
    for (size_t i = 0; i < vals.size(); ++i) out.v[i] = ad::Jet(vals[i]);
    return out;
  };
}

inline MatrixField polynomial_matrix_field(std::vector<std::vector<Polynomial>> entries) {
  const int r = static_cast<int>(entries.size());
  const int c = r ? static_cast<int>(entries[0].size()) : 0;
  return [entries = std::move(entries), r, c](std::span<const ad::Jet> q) {
    JetMat out(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) out.at(i, j) = entries[i][j].eval(q);
    return out;
  };
}

inline Tensor3Field
polynomial_tensor3_field(std::vector<std::vector<std::vector<Polynomial>>> entries) {
  const int d0 = static_cast<int>(entries.size());
  const int d1 = d0 ? static_cast<int>(entries[0].size()) : 0;
  const int d2 = d1 ? static_cast<int>(entries[0][0].size()) : 0;
  return [entries = std::move(entries), d0, d1, d2](std::span<const ad::Jet> q) {
    JetTen3 out(d0, d1, d2);
    for (int i = 0; i < d0; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out.at(i, j, k) = entries[i][j][k].eval(q);
    return out;
  };
}

/// Evaluate a matrix field at a plain point.
inline Eigen::MatrixXd eval_matrix(const MatrixField& f, const Eigen::VectorXd& q) {
  auto jets = ad::Jet::constants(q);
  return f(jets).values();
}

}  // namespace afields
