#include "afields/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "afields/models.hpp"

namespace afields {

Polynomial polynomial_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Polynomial(j.get<double>());
  if (!j.is_array()) throw ParseError("polynomial: expected number or term list");
  Polynomial p;
  for (const auto& term : j) {
    if (!term.contains("c")) throw ParseError("polynomial term needs a coefficient \"c\"");
    std::vector<int> expo;
    if (term.contains("e")) expo = term["e"].get<std::vector<int>>();
    p.add_term(term["c"].get<double>(), std::move(expo));
  }
  return p;
}

std::vector<std::vector<Polynomial>> poly_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("polynomial table: expected a 2-d array");
  std::vector<std::vector<Polynomial>> out;
  for (const auto& row : j) {
    std::vector<Polynomial> r;
    for (const auto& e : row) r.push_back(polynomial_from_json(e));
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

Tensor3Field structure_from_json(const nlohmann::json& j, int m) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "builtin:so3") {
      if (m != 3) throw ParseError("builtin:so3 requires rank 3");
      auto C = so3_structure_constants();
      std::vector<double> vals;
      vals.reserve(27);
      for (int g = 0; g < 3; ++g)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) vals.push_back(C[static_cast<size_t>(g)](a, b));
      return constant_tensor3_field(3, 3, 3, std::move(vals));
    }
    if (s == "builtin:zero") {
      return constant_tensor3_field(m, m, m, std::vector<double>(static_cast<size_t>(m * m * m), 0.0));
    }
    throw ParseError("unknown builtin structure: " + s);
  }
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    throw ParseError("structure: expected [gamma][alpha][beta] array of size rank");
  std::vector<std::vector<std::vector<Polynomial>>> entries;
  for (const auto& g : j) {
    std::vector<std::vector<Polynomial>> mat;
    for (const auto& row : g) {
      std::vector<Polynomial> r;
      for (const auto& e : row) r.push_back(polynomial_from_json(e));
      mat.push_back(std::move(r));
    }
    entries.push_back(std::move(mat));
  }
  return polynomial_tensor3_field(std::move(entries));
}

MatrixField anchor_from_json(const nlohmann::json& j, int n, int m) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "builtin:identity") {
      if (n != m) throw ParseError("builtin:identity anchor requires n == m");
      return constant_matrix_field(Eigen::MatrixXd::Identity(n, m));
    }
    if (s == "builtin:zero") return constant_matrix_field(Eigen::MatrixXd::Zero(n, m));
    throw ParseError("unknown builtin anchor: " + s);
  }
  auto table = poly_matrix_from_json(j);
  if (static_cast<int>(table.size()) != n ||
      (n > 0 && static_cast<int>(table[0].size()) != m))
    throw ParseError("anchor table must be base_dim x rank");
  return polynomial_matrix_field(std::move(table));
}

}  // namespace

LieAlgebroid algebroid_from_json(const nlohmann::json& j) {
  const int n = j.at("base_dim").get<int>();
  const int m = j.at("rank").get<int>();
  std::string label = j.value("chart_label", std::string{});
  MatrixField anchor = anchor_from_json(j.at("anchor"), n, m);
  Tensor3Field structure = structure_from_json(j.at("structure"), m);
  return LieAlgebroid(n, m, std::move(anchor), std::move(structure), std::move(label));
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_grid_csv(const GridField& f, std::ostream& os) {
  const int k = f.k(), n = f.n(), m = f.m();
  os << std::setprecision(17);
  for (int A = 0; A < k; ++A) os << (A ? "," : "") << "t" << (A + 1);
  for (int i = 0; i < n; ++i) os << ",q" << (i + 1);
  for (int A = 0; A < k; ++A)
    for (int a = 0; a < m; ++a)
      os << "," << (f.side() == Side::Lagrangian
                        ? "y_" + std::to_string(a + 1) + "_" + std::to_string(A + 1)
                        : "p_" + std::to_string(A + 1) + "_" + std::to_string(a + 1));
  os << "\n";

  for (long fl = 0; fl < f.num_nodes(); ++fl) {
    GridIndex idx = f.unflat(fl);
    Eigen::VectorXd t = f.spec().coords(idx);
    for (int A = 0; A < k; ++A) os << (A ? "," : "") << t[A];
    const Eigen::VectorXd& v = f.at_flat(fl);
    for (int i = 0; i < v.size(); ++i) os << "," << v[i];
    os << "\n";
  }
}

void write_grid_csv(const GridField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open " + path + " for writing");
  write_grid_csv(f, os);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

GridField read_grid_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("empty grid CSV");
  auto cols = split_csv_line(header);

  int k = 0, n = 0, m = 0;
  bool co = false;
  // column -> (kind, fiber flat position)
  struct Col {
    enum Kind { T, Q, F } kind;
    int a = 0, A = 0;
  };
  std::vector<Col> layout;
  for (const std::string& c : cols) {
    if (c.size() > 1 && c[0] == 't') {
      layout.push_back({Col::T, 0, std::stoi(c.substr(1)) - 1});
      k = std::max(k, std::stoi(c.substr(1)));
    } else if (c.size() > 1 && c[0] == 'q') {
      layout.push_back({Col::Q, std::stoi(c.substr(1)) - 1, 0});
      n = std::max(n, std::stoi(c.substr(1)));
    } else if (c.rfind("y_", 0) == 0) {
      auto us = c.find('_', 2);
      int a = std::stoi(c.substr(2, us - 2)), A = std::stoi(c.substr(us + 1));
      layout.push_back({Col::F, a - 1, A - 1});
      m = std::max(m, a);
    } else if (c.rfind("p_", 0) == 0) {
      auto us = c.find('_', 2);
      int A = std::stoi(c.substr(2, us - 2)), a = std::stoi(c.substr(us + 1));
      layout.push_back({Col::F, a - 1, A - 1});
      m = std::max(m, a);
      co = true;
    } else {
      throw ParseError("unrecognized grid CSV column: " + c);
    }
  }
  if (k == 0) throw ParseError("grid CSV has no t-columns");

  std::vector<Eigen::VectorXd> rows;
  std::vector<Eigen::VectorXd> tvals;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != layout.size()) throw ParseError("grid CSV row width mismatch");
    Eigen::VectorXd t(k);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n + m * k);
    for (size_t c = 0; c < cells.size(); ++c) {
      double x = std::stod(cells[c]);
      const Col& col = layout[c];
      if (col.kind == Col::T) t[col.A] = x;
      else if (col.kind == Col::Q) v[col.a] = x;
      else v[flat_fiber_index(n, m, col.a, col.A)] = x;
    }
    tvals.push_back(std::move(t));
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw ParseError("grid CSV has no data rows");

  // recover per-axis sorted unique coordinates and check uniform spacing
  GridSpec spec;
  spec.k = k;
  spec.counts.assign(static_cast<size_t>(k), 0);
  spec.h.assign(static_cast<size_t>(k), 1.0);
  spec.origin.assign(static_cast<size_t>(k), 0.0);
  spec.periodic.assign(static_cast<size_t>(k), false);
  std::vector<std::vector<double>> axes(static_cast<size_t>(k));
  for (int A = 0; A < k; ++A) {
    std::vector<double> vals;
    for (const auto& t : tvals) vals.push_back(t[A]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               vals.end());
    if (vals.size() < 1) throw ParseError("grid axis with no coordinates");
    axes[static_cast<size_t>(A)] = vals;
    spec.counts[static_cast<size_t>(A)] = static_cast<int>(vals.size());
    spec.origin[static_cast<size_t>(A)] = vals.front();
    if (vals.size() > 1) {
      double h = vals[1] - vals[0];
      for (size_t i = 1; i + 1 < vals.size(); ++i)
        if (std::abs((vals[i + 1] - vals[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
          throw ParseError("grid CSV is not uniformly spaced");
      spec.h[static_cast<size_t>(A)] = h;
    }
  }

  long expect = 1;
  for (int c : spec.counts) expect *= c;
  if (expect != static_cast<long>(rows.size()))
    throw ParseError("grid CSV is not a full rectangular grid");

  GridField out(spec, n, m, co ? Side::Hamiltonian : Side::Lagrangian);
  std::vector<char> seen(static_cast<size_t>(expect), 0);
  for (size_t r = 0; r < rows.size(); ++r) {
    GridIndex idx(static_cast<size_t>(k));
    for (int A = 0; A < k; ++A) {
      const auto& ax = axes[static_cast<size_t>(A)];
      auto it = std::lower_bound(ax.begin(), ax.end(), tvals[r][A] - 1e-12);
      idx[static_cast<size_t>(A)] = static_cast<int>(it - ax.begin());
    }
    long fl = out.flat(idx);
    if (seen[static_cast<size_t>(fl)]) throw ParseError("grid CSV repeats a node");
    seen[static_cast<size_t>(fl)] = 1;
    out.at_flat(fl) = rows[r];
  }
  return out;
}

GridField read_grid_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_grid_csv(in);
}

nlohmann::json validation_report_json(const ValidationReport& r) {
  nlohmann::json j;
  j["max_violation_jacobi"] = r.max_violation_jacobi;
  j["max_violation_anchor"] = r.max_violation_anchor;
  j["pass"] = r.pass;
  j["worst_identity"] = r.worst_identity;
  j["worst_point"] = std::vector<double>(r.worst_point.data(),
                                         r.worst_point.data() + r.worst_point.size());
  return j;
}

nlohmann::json el_residual_json(const ElResidual& r, const GridIndex& node) {
  nlohmann::json j;
  j["node"] = node;
  j["el_res"] = std::vector<double>(r.el_res.data(), r.el_res.data() + r.el_res.size());
  std::vector<std::vector<double>> anchor;
  for (int i = 0; i < r.anchor_res.rows(); ++i)
    anchor.emplace_back(r.anchor_res.row(i).begin(), r.anchor_res.row(i).end());
  j["anchor_res"] = anchor;
  std::vector<std::vector<std::vector<double>>> morph;
  for (const auto& M : r.morphism_res) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < M.rows(); ++i) rows.emplace_back(M.row(i).begin(), M.row(i).end());
    morph.push_back(std::move(rows));
  }
  j["morphism_res"] = morph;
  j["norms"] = {{"el_linf", r.el_linf()},
                {"el_rel", r.el_rel()},
                {"morphism_linf", r.morphism_linf()},
                {"momentum_scale", r.momentum_scale}};
  return j;
}

nlohmann::json transport_report_json(const TransportResult& r) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& nrep : r.nodes) {
    nodes.push_back({{"node", nrep.node},
                     {"el_res_norm", nrep.el_res_norm},
                     {"ham_res_norm", nrep.ham_res_norm},
                     {"invert_iters", nrep.invert_iters},
                     {"regular", nrep.regular}});
  }
  return {{"nodes", nodes}, {"max_el", r.max_el}, {"max_ham", r.max_ham}};
}

nlohmann::json convergence_report_json(const ConvergenceReport& r) {
  return {{"spacings", r.spacings},
          {"residuals", r.residuals},
          {"fitted_order", r.fitted_order},
          {"exact", r.exact}};
}

}  // namespace afields
