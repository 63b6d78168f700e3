#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "afields/algebroid.hpp"
#include "afields/grid.hpp"
#include "afields/lagrangian.hpp"
#include "afields/legendre.hpp"
#include "afields/poly.hpp"

namespace afields {

/// Polynomial encodings: a bare number (constant) or a list of terms
/// [{"c": coeff, "e": [exponents...]}, ...].
Polynomial polynomial_from_json(const nlohmann::json& j);

/// Rectangular table of polynomials (or numbers).
std::vector<std::vector<Polynomial>> poly_matrix_from_json(const nlohmann::json& j);

/// Model descriptor:
/// { "base_dim": n, "rank": m,
///   "anchor": "builtin:identity" | "builtin:zero" | poly table (n x m),
///   "structure": "builtin:so3" | dense [gamma][alpha][beta] of polys/numbers,
///   "chart_label": optional }
LieAlgebroid algebroid_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

/// CSV grid fields. Header: t1,..,tk, q1,..,qn, then y_<alpha>_<A> columns
/// (Whitney side) or p_<A>_<alpha> columns (dual side); rows run row-major
/// over the grid with axis 0 slowest.
void write_grid_csv(const GridField& f, std::ostream& os);
void write_grid_csv(const GridField& f, const std::string& path);
GridField read_grid_csv(std::istream& is);
GridField read_grid_csv_file(const std::string& path);

nlohmann::json validation_report_json(const ValidationReport& r);
nlohmann::json el_residual_json(const ElResidual& r, const GridIndex& node);
nlohmann::json transport_report_json(const TransportResult& r);
nlohmann::json convergence_report_json(const ConvergenceReport& r);

}  // namespace afields
