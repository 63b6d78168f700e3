#include "afields/models.hpp"

#include <random>

#include "afields/io.hpp"

namespace afields {

namespace {

std::vector<Eigen::VectorXd> validation_samples(int n, int count, unsigned seed = 20240229u) {
  std::vector<Eigen::VectorXd> qs;
  if (n == 0) {
    qs.emplace_back(Eigen::VectorXd(0));
    return qs;
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q[i] = U(rng);
    qs.push_back(std::move(q));
  }
  return qs;
}

}  // namespace

LieAlgebroid standard_algebroid(int n) {
  if (n < 1) throw DimensionMismatch("standard_algebroid: n >= 1");
  return LieAlgebroid(
      n, n, constant_matrix_field(Eigen::MatrixXd::Identity(n, n)),
      constant_tensor3_field(n, n, n, std::vector<double>(static_cast<size_t>(n * n * n), 0.0)),
      "standard");
}

LieAlgebroid lie_algebra_algebroid(const std::vector<Eigen::MatrixXd>& C) {
  const int m = static_cast<int>(C.size());
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(m * m * m));
  for (int g = 0; g < m; ++g) {
    if (C[static_cast<size_t>(g)].rows() != m || C[static_cast<size_t>(g)].cols() != m)
      throw DimensionMismatch("lie_algebra_algebroid: C must be m x m x m");
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) vals.push_back(C[static_cast<size_t>(g)](a, b));
  }

  for (int g = 0; g < m; ++g)
    if ((C[static_cast<size_t>(g)] + C[static_cast<size_t>(g)].transpose())
            .cwiseAbs()
            .maxCoeff() > 0.0)
      throw JacobiViolation((C[static_cast<size_t>(g)] + C[static_cast<size_t>(g)].transpose())
                                .cwiseAbs()
                                .maxCoeff());

  LieAlgebroid alg(0, m, constant_matrix_field(Eigen::MatrixXd::Zero(0, m)),
                   constant_tensor3_field(m, m, m, std::move(vals)), "lie-algebra");
  auto qs = validation_samples(0, 1);
  auto rep = alg.validate_structure_equations(qs, 1e-12);
  if (!rep.pass) throw JacobiViolation(rep.max_violation());
  return alg;
}

std::vector<Eigen::MatrixXd> so3_structure_constants() {
  std::vector<Eigen::MatrixXd> C(3, Eigen::MatrixXd::Zero(3, 3));
  // C[gamma](alpha, beta) = epsilon_{alpha beta gamma}
  C[2](0, 1) = 1.0;
  C[2](1, 0) = -1.0;
  C[0](1, 2) = 1.0;
  C[0](2, 1) = -1.0;
  C[1](2, 0) = 1.0;
  C[1](0, 2) = -1.0;
  return C;
}

LieAlgebroid so3_algebroid() { return lie_algebra_algebroid(so3_structure_constants()); }

LieAlgebroid poisson_cotangent_algebroid(const std::vector<std::vector<Polynomial>>& lambda,
                                         int n) {
  if (static_cast<int>(lambda.size()) != n)
    throw DimensionMismatch("poisson_cotangent_algebroid: Lambda must be n x n");

  // anchor rho^j_i = Lambda^{ij}: column i (the section dq^i) maps to the
  // vector Lambda^{i.}; structure C^k_{ij} = dLambda^{ij}/dq^k
  std::vector<std::vector<Polynomial>> anchor_entries(
      static_cast<size_t>(n), std::vector<Polynomial>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      anchor_entries[static_cast<size_t>(j)][static_cast<size_t>(i)] =
          lambda[static_cast<size_t>(i)][static_cast<size_t>(j)];

  std::vector<std::vector<std::vector<Polynomial>>> structure_entries(
      static_cast<size_t>(n),
      std::vector<std::vector<Polynomial>>(static_cast<size_t>(n),
                                           std::vector<Polynomial>(static_cast<size_t>(n))));
  for (int kidx = 0; kidx < n; ++kidx)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        structure_entries[static_cast<size_t>(kidx)][static_cast<size_t>(i)]
                         [static_cast<size_t>(j)] =
                             lambda[static_cast<size_t>(i)][static_cast<size_t>(j)]
                                 .derivative(kidx);

  LieAlgebroid alg(n, n, polynomial_matrix_field(std::move(anchor_entries)),
                   polynomial_tensor3_field(std::move(structure_entries)),
                   "poisson-cotangent");

  auto qs = validation_samples(n, 40);
  auto rep = alg.validate_structure_equations(qs, 1e-8);
  if (!rep.pass)
    throw Error("poisson_cotangent_algebroid: structure equations fail (non-Poisson bivector, "
                "max violation " +
                std::to_string(rep.max_violation()) + ")");
  return alg;
}

LieAlgebroid atiyah_trivial(int n, const std::vector<Eigen::MatrixXd>& C_g,
                            const std::vector<std::vector<Polynomial>>& A) {
  const int g = static_cast<int>(C_g.size());
  if (n < 0) throw DimensionMismatch("atiyah_trivial: n >= 0");
  if (n > 0 && (static_cast<int>(A.size()) != g ||
                (g > 0 && static_cast<int>(A[0].size()) != n)))
    throw DimensionMismatch("atiyah_trivial: connection table must be dim(g) x n");
  if (g == 0) throw DimensionMismatch("atiyah_trivial: structure group must be nontrivial");

  // Jacobi for the group constants (throws otherwise)
  lie_algebra_algebroid(C_g);

  const int m = n + g;

  // rho(e_i) = d/dq^i, rho(e_a) = 0
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, m);
  rho.block(0, 0, n, n) = Eigen::MatrixXd::Identity(n, n);
  MatrixField anchor = constant_matrix_field(rho);

  // symbolic q-derivatives of the connection for the curvature terms
  std::vector<std::vector<std::vector<Polynomial>>> dA(
      static_cast<size_t>(g),
      std::vector<std::vector<Polynomial>>(static_cast<size_t>(n),
                                           std::vector<Polynomial>(static_cast<size_t>(n))));
  for (int a = 0; a < g; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dA[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)] =
            A[static_cast<size_t>(a)][static_cast<size_t>(i)].derivative(j);

  Tensor3Field structure = [n, g, m, C_g, A, dA](std::span<const ad::Jet> q) {
    JetTen3 out(m, m, m);

    // curvature B^c_{ij} = dA^c_i/dq^j - dA^c_j/dq^i - Cg^c_{ab} A^a_i A^b_j
    for (int c = 0; c < g; ++c) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          ad::Jet B = dA[static_cast<size_t>(c)][static_cast<size_t>(i)][static_cast<size_t>(j)]
                          .eval(q) -
                      dA[static_cast<size_t>(c)][static_cast<size_t>(j)][static_cast<size_t>(i)]
                          .eval(q);
          for (int a = 0; a < g; ++a)
            for (int b = 0; b < g; ++b)
              B -= C_g[static_cast<size_t>(c)](a, b) *
                   A[static_cast<size_t>(a)][static_cast<size_t>(i)].eval(q) *
                   A[static_cast<size_t>(b)][static_cast<size_t>(j)].eval(q);
          // [e_i, e_j] = -B^c_{ij} e_c
          out.at(n + c, i, j) = -B;
        }
      }
      // [e_i, e_a] = Cg^c_{ba} A^b_i e_c; the index order is forced by the
      // structure equations together with the curvature convention above
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < g; ++a) {
          ad::Jet acc(0.0);
          for (int b = 0; b < g; ++b)
            acc += C_g[static_cast<size_t>(c)](b, a) *
                   A[static_cast<size_t>(b)][static_cast<size_t>(i)].eval(q);
          out.at(n + c, i, n + a) = acc;
          out.at(n + c, n + a, i) = -acc;
        }
      }
      // [e_a, e_b] = Cg^c_{ab} e_c
      for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) out.at(n + c, n + a, n + b) = ad::Jet(C_g[static_cast<size_t>(c)](a, b));
    }
    return out;
  };

  LieAlgebroid alg(n, m, std::move(anchor), std::move(structure), "atiyah-trivial");
  auto qs = validation_samples(n, 40);
  auto rep = alg.validate_structure_equations(qs, 1e-8);
  if (!rep.pass)
    throw Error("atiyah_trivial: structure equations fail (max violation " +
                std::to_string(rep.max_violation()) + ")");
  return alg;
}

LagrangianSystem harmonic_map_lagrangian() {
  LieAlgebroid so3 = so3_algebroid();
  const int m = 3, k = 2;
  FieldFunction L(0, m, k, Side::Lagrangian, [m, k](std::span<const ad::Jet> x) {
    ad::Jet acc(0.0);
    for (int A = 0; A < k; ++A)
      for (int a = 0; a < m; ++a) {
        const ad::Jet& y = x[static_cast<size_t>(flat_fiber_index(0, m, a, A))];
        acc += y * y;
      }
    return acc;
  });
  return LagrangianSystem(std::move(so3), k, std::move(L));
}

LagrangianSystem poisson_sigma_lagrangian(const std::vector<std::vector<Polynomial>>& lambda,
                                          int n) {
  LieAlgebroid alg = poisson_cotangent_algebroid(lambda, n);
  const int k = 2;
  FieldFunction L(n, n, k, Side::Lagrangian, [lambda, n](std::span<const ad::Jet> x) {
    auto q = x.subspan(0, static_cast<size_t>(n));
    ad::Jet acc(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (lambda[static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero()) continue;
        acc += lambda[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(q) *
               x[static_cast<size_t>(flat_fiber_index(n, n, i, 0))] *
               x[static_cast<size_t>(flat_fiber_index(n, n, j, 1))];
      }
    return -0.5 * acc;
  });
  return LagrangianSystem(std::move(alg), k, std::move(L));
}

LagrangianSystem euler_poincare_lagrangian(const std::vector<Eigen::MatrixXd>& C_g,
                                           const Eigen::VectorXd& inertia, int k,
                                           Eigen::VectorXd signature) {
  LieAlgebroid alg = lie_algebra_algebroid(C_g);
  const int m = alg.rank();
  if (inertia.size() != m) throw DimensionMismatch("euler_poincare_lagrangian: inertia size");
  if (signature.size() == 0) signature = Eigen::VectorXd::Ones(k);
  if (signature.size() != k) throw DimensionMismatch("euler_poincare_lagrangian: signature size");

  FieldFunction L(0, m, k, Side::Lagrangian,
                  [m, k, inertia, signature](std::span<const ad::Jet> x) {
                    ad::Jet acc(0.0);
                    for (int A = 0; A < k; ++A)
                      for (int a = 0; a < m; ++a) {
                        const ad::Jet& y = x[static_cast<size_t>(flat_fiber_index(0, m, a, A))];
                        acc += 0.5 * signature[A] * inertia[a] * y * y;
                      }
                    return acc;
                  });
  return LagrangianSystem(std::move(alg), k, std::move(L));
}

LagrangianSystem wave_lagrangian() {
  LieAlgebroid alg = standard_algebroid(1);
  const int k = 2;
  FieldFunction L(1, 1, k, Side::Lagrangian, [](std::span<const ad::Jet> x) {
    const ad::Jet& y1 = x[static_cast<size_t>(flat_fiber_index(1, 1, 0, 0))];
    const ad::Jet& y2 = x[static_cast<size_t>(flat_fiber_index(1, 1, 0, 1))];
    return 0.5 * (y1 * y1 - y2 * y2);
  });
  return LagrangianSystem(std::move(alg), k, std::move(L));
}

namespace {

std::vector<std::vector<Polynomial>> constant_symplectic_r2() {
  std::vector<std::vector<Polynomial>> L(2, std::vector<Polynomial>(2));
  L[0][1] = Polynomial(1.0);
  L[1][0] = Polynomial(-1.0);
  return L;
}

std::vector<Eigen::MatrixXd> structure_from_model_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "so3") return so3_structure_constants();
  std::vector<Eigen::MatrixXd> C;
  for (const auto& g : j) {
    Eigen::MatrixXd M(g.size(), g.size());
    for (size_t a = 0; a < g.size(); ++a)
      for (size_t b = 0; b < g[a].size(); ++b)
        M(static_cast<int>(a), static_cast<int>(b)) = g[a][b].get<double>();
    C.push_back(std::move(M));
  }
  return C;
}

}  // namespace

ModelDescriptor make_model(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);

  ModelDescriptor md;
  md.name = spec;

  if (name == "standard") {
    int n = arg.empty() ? 1 : std::stoi(arg);
    md.algebroid = std::make_shared<LieAlgebroid>(standard_algebroid(n));
  } else if (name == "so3") {
    md.algebroid = std::make_shared<LieAlgebroid>(so3_algebroid());
  } else if (name == "lie") {
    auto j = load_json_file(arg);
    md.algebroid =
        std::make_shared<LieAlgebroid>(lie_algebra_algebroid(structure_from_model_json(j.at("structure"))));
  } else if (name == "poisson") {
    auto j = load_json_file(arg);
    md.algebroid = std::make_shared<LieAlgebroid>(poisson_cotangent_algebroid(
        poly_matrix_from_json(j.at("lambda")), j.at("n").get<int>()));
  } else if (name == "atiyah") {
    auto j = load_json_file(arg);
    md.algebroid = std::make_shared<LieAlgebroid>(
        atiyah_trivial(j.at("n").get<int>(), structure_from_model_json(j.at("structure_g")),
                       poly_matrix_from_json(j.at("connection"))));
  } else if (name == "harmonic") {
    auto sys = std::make_shared<LagrangianSystem>(harmonic_map_lagrangian());
    md.algebroid = std::make_shared<LieAlgebroid>(sys->algebroid());
    md.lagrangian = sys;
  } else if (name == "sigma") {
    std::vector<std::vector<Polynomial>> lambda;
    int n = 2;
    if (arg.empty()) {
      lambda = constant_symplectic_r2();
    } else {
      auto j = load_json_file(arg);
      lambda = poly_matrix_from_json(j.at("lambda"));
      n = j.at("n").get<int>();
    }
    auto sys = std::make_shared<LagrangianSystem>(poisson_sigma_lagrangian(lambda, n));
    md.algebroid = std::make_shared<LieAlgebroid>(sys->algebroid());
    md.lagrangian = sys;
    md.march_tag = "sigma";
  } else if (name == "euler-poincare") {
    std::vector<Eigen::MatrixXd> C = so3_structure_constants();
    Eigen::VectorXd I(3);
    I << 1.0, 2.0, 3.0;
    int k = 1;
    Eigen::VectorXd sig;
    if (!arg.empty()) {
      auto j = load_json_file(arg);
      if (j.contains("structure")) C = structure_from_model_json(j.at("structure"));
      if (j.contains("inertia")) {
        auto iv = j.at("inertia").get<std::vector<double>>();
        I = Eigen::Map<Eigen::VectorXd>(iv.data(), static_cast<long>(iv.size()));
      }
      k = j.value("k", 1);
      if (j.contains("signature")) {
        auto sv = j.at("signature").get<std::vector<double>>();
        sig = Eigen::Map<Eigen::VectorXd>(sv.data(), static_cast<long>(sv.size()));
      }
    }
    if (k == 2 && sig.size() == 0) {
      sig.resize(2);
      sig << 1.0, -1.0;  // marchable slot signature
    }
    auto sys = std::make_shared<LagrangianSystem>(euler_poincare_lagrangian(C, I, k, sig));
    md.algebroid = std::make_shared<LieAlgebroid>(sys->algebroid());
    md.lagrangian = sys;
    if (k == 2) md.march_tag = "euler-poincare";
  } else if (name == "wave") {
    auto sys = std::make_shared<LagrangianSystem>(wave_lagrangian());
    md.algebroid = std::make_shared<LieAlgebroid>(sys->algebroid());
    md.lagrangian = sys;
    md.march_tag = "wave";
  } else {
    throw ParseError("unknown model: " + spec);
  }
  return md;
}

}  // namespace afields
