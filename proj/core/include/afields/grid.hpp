#pragma once

#include <functional>
#include <vector>

#include "afields/algebroid.hpp"
#include "afields/whitney.hpp"

namespace afields {

/// Uniform rectangular grid over R^k. Axes marked periodic wrap their
/// central-difference stencils; all others expose a genuine boundary.
struct GridSpec {
  int k = 0;
  std::vector<int> counts;
  std::vector<double> h;
  std::vector<double> origin;
  std::vector<bool> periodic;

  static GridSpec uniform(int k, int count, double h0, double origin0 = 0.0,
                          bool periodic0 = false) {
    GridSpec s;
    s.k = k;
    s.counts.assign(k, count);
    s.h.assign(k, h0);
    s.origin.assign(k, origin0);
    s.periodic.assign(k, periodic0);
    return s;
  }

  long num_nodes() const {
    long n = 1;
    for (int c : counts) n *= c;
    return n;
  }
  double coord(int axis, int idx) const { return origin[axis] + h[axis] * idx; }
  Eigen::VectorXd coords(const std::vector<int>& idx) const {
    Eigen::VectorXd t(k);
    for (int a = 0; a < k; ++a) t[a] = coord(a, idx[a]);
    return t;
  }
};

using GridIndex = std::vector<int>;

/// Discrete map from a grid into the Whitney sum (or its dual). Values are
/// stored in the flat [q; fiber] layout; every node is populated.
class GridField {
public:
  GridField() = default;
  GridField(GridSpec spec, int n, int m, Side side);

  const GridSpec& spec() const { return spec_; }
  int n() const { return n_; }
  int m() const { return m_; }
  int k() const { return spec_.k; }
  Side side() const { return side_; }
  int value_dim() const { return n_ + m_ * spec_.k; }

  long flat(const GridIndex& idx) const;
  GridIndex unflat(long f) const;
  long num_nodes() const { return spec_.num_nodes(); }

  Eigen::VectorXd& at(const GridIndex& idx) { return vals_[static_cast<size_t>(flat(idx))]; }
  const Eigen::VectorXd& at(const GridIndex& idx) const {
    return vals_[static_cast<size_t>(flat(idx))];
  }
  Eigen::VectorXd& at_flat(long f) { return vals_[static_cast<size_t>(f)]; }
  const Eigen::VectorXd& at_flat(long f) const { return vals_[static_cast<size_t>(f)]; }

  WhitneyPoint whitney_at(const GridIndex& idx) const;
  CoWhitneyPoint cowhitney_at(const GridIndex& idx) const;

  /// Whether the central stencil fits at idx along every axis.
  bool interior(const GridIndex& idx) const;
  bool interior_axis(const GridIndex& idx, int axis) const;

  /// Value at idx shifted by off nodes along axis (wraps on periodic axes).
  const Eigen::VectorXd& shifted(const GridIndex& idx, int axis, int off) const;

  /// Second-order central difference of the full value vector along an axis.
  Eigen::VectorXd fd_jet(const GridIndex& idx, int axis) const;

  /// All grid indices whose full central stencil is available.
  std::vector<GridIndex> interior_nodes() const;
  std::vector<GridIndex> all_nodes() const;

private:
  GridSpec spec_;
  int n_ = 0, m_ = 0;
  Side side_ = Side::Lagrangian;
  std::vector<Eigen::VectorXd> vals_;
};

/// First prolongation of a discrete base map on the standard algebroid:
/// the fiber picks up the central-difference jet of q along each axis.
/// Non-periodic axes lose one node on each end (no canonical one-sided lift).
GridField first_prolongation(const GridField& base, const LieAlgebroid& alg);

struct ConvergenceReport {
  std::vector<double> spacings;
  std::vector<double> residuals;
  double fitted_order = 0.0;
  bool exact = false;  // all residuals at rounding level; no order to fit

  bool order_within(double lo, double hi) const {
    return exact || (fitted_order >= lo && fitted_order <= hi);
  }
};

/// Least-squares log-log fit of residual against spacing.
ConvergenceReport convergence_study(const std::vector<double>& spacings,
                                    const std::function<double(double)>& residual_of_h);

}  // namespace afields
