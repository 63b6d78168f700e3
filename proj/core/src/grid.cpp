#include "afields/grid.hpp"

#include <cmath>

namespace afields {

GridField::GridField(GridSpec spec, int n, int m, Side side)
    : spec_(std::move(spec)), n_(n), m_(m), side_(side) {
  if (spec_.k < 1) throw DimensionMismatch("GridField: k >= 1 required");
  if (static_cast<int>(spec_.counts.size()) != spec_.k ||
      static_cast<int>(spec_.h.size()) != spec_.k)
    throw DimensionMismatch("GridField: spec arrays must have length k");
  if (spec_.origin.empty()) spec_.origin.assign(spec_.k, 0.0);
  if (spec_.periodic.empty()) spec_.periodic.assign(spec_.k, false);
  vals_.assign(static_cast<size_t>(spec_.num_nodes()),
               Eigen::VectorXd::Zero(value_dim()));
}

long GridField::flat(const GridIndex& idx) const {
  long f = 0;
  for (int a = 0; a < spec_.k; ++a) {
    if (idx[a] < 0 || idx[a] >= spec_.counts[a]) throw BoundaryNode("grid index out of range");
    f = f * spec_.counts[a] + idx[a];
  }
  return f;
}

GridIndex GridField::unflat(long f) const {
  GridIndex idx(static_cast<size_t>(spec_.k));
  for (int a = spec_.k - 1; a >= 0; --a) {
    idx[static_cast<size_t>(a)] = static_cast<int>(f % spec_.counts[a]);
    f /= spec_.counts[a];
  }
  return idx;
}

WhitneyPoint GridField::whitney_at(const GridIndex& idx) const {
  if (side_ != Side::Lagrangian) throw Error("grid field is valued in the dual sum");
  return unpack_whitney(at(idx), n_, m_, spec_.k);
}

CoWhitneyPoint GridField::cowhitney_at(const GridIndex& idx) const {
  if (side_ != Side::Hamiltonian) throw Error("grid field is valued in the Whitney sum");
  return unpack_cowhitney(at(idx), n_, m_, spec_.k);
}

bool GridField::interior_axis(const GridIndex& idx, int axis) const {
  if (spec_.periodic[axis]) return true;
  return idx[axis] >= 1 && idx[axis] <= spec_.counts[axis] - 2;
}

bool GridField::interior(const GridIndex& idx) const {
  for (int a = 0; a < spec_.k; ++a)
    if (!interior_axis(idx, a)) return false;
  return true;
}

const Eigen::VectorXd& GridField::shifted(const GridIndex& idx, int axis, int off) const {
  GridIndex j = idx;
  int v = j[axis] + off;
  if (spec_.periodic[axis]) {
    const int c = spec_.counts[axis];
    v = ((v % c) + c) % c;
  } else if (v < 0 || v >= spec_.counts[axis]) {
    throw BoundaryNode("central stencil leaves the grid");
  }
  j[axis] = v;
  return at(j);
}

Eigen::VectorXd GridField::fd_jet(const GridIndex& idx, int axis) const {
  if (!interior_axis(idx, axis)) throw BoundaryNode("fd_jet needs an interior node");
  return (shifted(idx, axis, +1) - shifted(idx, axis, -1)) / (2.0 * spec_.h[axis]);
}

std::vector<GridIndex> GridField::interior_nodes() const {
  std::vector<GridIndex> out;
  for (long f = 0; f < num_nodes(); ++f) {
    GridIndex idx = unflat(f);
    if (interior(idx)) out.push_back(std::move(idx));
  }
  return out;
}

std::vector<GridIndex> GridField::all_nodes() const {
  std::vector<GridIndex> out;
  out.reserve(static_cast<size_t>(num_nodes()));
  for (long f = 0; f < num_nodes(); ++f) out.push_back(unflat(f));
  return out;
}

GridField first_prolongation(const GridField& base, const LieAlgebroid& alg) {
  const int n = alg.base_dim();
  if (alg.rank() != n)
    throw Error("first_prolongation: canonical lift exists on the standard algebroid only");
  // verify the anchor really is the identity with vanishing structure functions
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(n);
  if ((alg.anchor_values(probe) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 0.0)
    throw Error("first_prolongation: canonical lift exists on the standard algebroid only");
  for (const auto& c : alg.structure_values(probe))
    if (c.cwiseAbs().maxCoeff() > 0.0)
      throw Error("first_prolongation: canonical lift exists on the standard algebroid only");

  if (base.m() != 0 || base.n() != n)
    throw DimensionMismatch("first_prolongation: base grid must carry q-values only");

  const GridSpec& bs = base.spec();
  const int k = bs.k;

  GridSpec out_spec = bs;
  for (int a = 0; a < k; ++a) {
    if (bs.periodic[a]) continue;
    out_spec.counts[a] -= 2;  // shrink to where central jets exist
    out_spec.origin[a] += bs.h[a];
    if (out_spec.counts[a] < 1) throw DimensionMismatch("first_prolongation: grid too small");
  }

  GridField out(out_spec, n, n, Side::Lagrangian);
  for (const GridIndex& oidx : out.all_nodes()) {
    GridIndex bidx = oidx;
    for (int a = 0; a < k; ++a)
      if (!bs.periodic[a]) bidx[a] += 1;
    Eigen::VectorXd v(out.value_dim());
    v.head(n) = base.at(bidx);
    for (int A = 0; A < k; ++A) {
      Eigen::VectorXd d = base.fd_jet(bidx, A);
      for (int i = 0; i < n; ++i) v[flat_fiber_index(n, n, i, A)] = d[i];
    }
    out.at(oidx) = v;
  }
  return out;
}

ConvergenceReport convergence_study(const std::vector<double>& spacings,
                                    const std::function<double(double)>& residual_of_h) {
  if (spacings.size() < 3) throw Error("convergence_study: need at least 3 spacings");
  ConvergenceReport rep;
  rep.spacings = spacings;
  for (double h : spacings) rep.residuals.push_back(residual_of_h(h));

  double rmax = 0.0;
  for (double r : rep.residuals) rmax = std::max(rmax, std::abs(r));
  if (rmax < 1e-13) {
    rep.exact = true;
    rep.fitted_order = 0.0;
    return rep;
  }

  // least squares on log residual = order * log h + c
  const int N = static_cast<int>(spacings.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < N; ++i) {
    double x = std::log(spacings[static_cast<size_t>(i)]);
    double y = std::log(std::max(rep.residuals[static_cast<size_t>(i)], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.fitted_order = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  return rep;
}

}  // namespace afields
