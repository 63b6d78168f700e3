#include <doctest.h>

#include "helpers.hpp"

using namespace afields;
using testutil::rand_mat;
using testutil::rand_points;
using testutil::rand_vec;
using testutil::rand_whitney;

TEST_CASE("prolonged standard algebroid is the full identity pairing") {
  ProlongedAlgebroid pro(standard_algebroid(2), 2, Side::Lagrangian);
  const LieAlgebroid& P = pro.as_algebroid();
  CHECK(P.base_dim() == 2 + 2 * 2);
  CHECK(P.rank() == 2 + 2 * 2);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
  CHECK((P.anchor_values(x) - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& c : P.structure_values(x)) CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("all brackets touching vertical sections vanish") {
  std::mt19937 rng(11);
  ProlongedAlgebroid pro(poisson_cotangent_algebroid(testutil::lie_poisson_so3_table(), 3), 2,
                         Side::Lagrangian);
  const LieAlgebroid& P = pro.as_algebroid();
  const int m = 3;
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd x = rand_vec(rng, P.base_dim());
    auto C = P.structure_values(x);
    for (int g = 0; g < P.rank(); ++g)
      for (int a = 0; a < P.rank(); ++a)
        for (int b = 0; b < P.rank(); ++b)
          if (a >= m || b >= m || g >= m)
            CHECK(C[static_cast<size_t>(g)](a, b) == 0.0);
  }
}

TEST_CASE("prolonged so(3) keeps the epsilon bracket on the X block") {
  ProlongedAlgebroid pro(so3_algebroid(), 2, Side::Lagrangian);
  const LieAlgebroid& P = pro.as_algebroid();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(P.base_dim());
  auto C = P.structure_values(x);
  auto eps = so3_structure_constants();
  for (int g = 0; g < 3; ++g)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK(C[static_cast<size_t>(g)](a, b) == eps[static_cast<size_t>(g)](a, b));
}

TEST_CASE("prolongations are themselves Lie algebroids") {
  std::mt19937 rng(12);
  auto models = std::vector<LieAlgebroid>{
      standard_algebroid(2), so3_algebroid(),
      poisson_cotangent_algebroid(testutil::lie_poisson_so3_table(), 3),
      testutil::atiyah_so3_r2()};
  for (const auto& alg : models) {
    for (int k = 1; k <= 3; ++k) {
      for (Side side : {Side::Lagrangian, Side::Hamiltonian}) {
        ProlongedAlgebroid pro(alg, k, side);
        auto samples = rand_points(rng, pro.as_algebroid().base_dim(), 25);
        auto rep = pro.as_algebroid().validate_structure_equations(samples, 1e-8);
        CHECK(rep.pass);
      }
    }
  }
}

TEST_CASE("vertical lift places fiber coordinates in the requested slot") {
  WhitneyPoint b = WhitneyPoint::zero(0, 3, 2);
  Eigen::VectorXd e = Eigen::VectorXd::Unit(3, 0);
  ProlongedElement v = vertical_lift(e, b, 1);
  CHECK(v.z.cwiseAbs().maxCoeff() == 0.0);
  CHECK(v.w(0, 1) == 1.0);
  CHECK(v.w.cwiseAbs().sum() == 1.0);

  ProlongedElement zero = vertical_lift(Eigen::VectorXd::Zero(3), b, 0);
  CHECK(zero.w.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(vertical_lift(e, b, 2), DimensionMismatch);
}

TEST_CASE("vertical lift is linear in the fiber argument") {
  std::mt19937 rng(13);
  WhitneyPoint b = rand_whitney(rng, 2, 3, 2);
  Eigen::VectorXd e = rand_vec(rng, 3), f = rand_vec(rng, 3);
  ProlongedElement lhs = vertical_lift(2.0 * e + f, b, 1);
  ProlongedElement r1 = vertical_lift(e, b, 1), r2 = vertical_lift(f, b, 1);
  CHECK((lhs.w - (2.0 * r1.w + r2.w)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("Liouville section reads off the slot coordinates") {
  WhitneyPoint b = WhitneyPoint::zero(0, 2, 2);
  b.y << 1, 2, 3, 4;
  ProlongedElement d = liouville_section(b, 0);
  CHECK(d.w(0, 0) == 1.0);
  CHECK(d.w(1, 0) == 3.0);
  CHECK(d.w.col(1).cwiseAbs().maxCoeff() == 0.0);

  WhitneyPoint z = WhitneyPoint::zero(0, 2, 2);
  CHECK(liouville_section(z, 1).w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Liouville section is the vertical lift of the slot projection") {
  std::mt19937 rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    WhitneyPoint b = rand_whitney(rng, 1, 3, 2);
    for (int A = 0; A < 2; ++A) {
      ProlongedElement lhs = liouville_section(b, A);
      ProlongedElement rhs = vertical_lift(b.y.col(A), b, A);
      CHECK((lhs.w - rhs.w).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("vertical endomorphism maps X to V and kills verticals") {
  WhitneyPoint b = WhitneyPoint::zero(0, 3, 2);
  ProlongedElement X;  // basis element X_1
  X.base = b;
  X.z = Eigen::VectorXd::Unit(3, 1);
  X.w = Eigen::MatrixXd::Zero(3, 2);
  ProlongedElement img = vertical_endomorphism(X, 0);
  CHECK(img.z.cwiseAbs().maxCoeff() == 0.0);
  CHECK(img.w(1, 0) == 1.0);
  CHECK(img.w.cwiseAbs().sum() == 1.0);

  ProlongedElement V;  // purely vertical element
  V.base = b;
  V.z = Eigen::VectorXd::Zero(3);
  V.w = Eigen::MatrixXd::Random(3, 2);
  CHECK(vertical_endomorphism(V, 1).w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("composing two vertical endomorphisms yields zero") {
  std::mt19937 rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    WhitneyPoint b = rand_whitney(rng, 2, 3, 3);
    ProlongedElement Z = testutil::rand_element(rng, b);
    for (int A = 0; A < 3; ++A)
      for (int B = 0; B < 3; ++B) {
        ProlongedElement img = vertical_endomorphism(vertical_endomorphism(Z, B), A);
        CHECK(img.z.cwiseAbs().maxCoeff() == 0.0);
        CHECK(img.w.cwiseAbs().maxCoeff() == 0.0);
      }
  }
}

TEST_CASE("coefficient SOPDE test accepts and rejects correctly") {
  std::mt19937 rng(16);
  const int n = 1, m = 2, k = 2;
  SopdeSection good = [m, k](const WhitneyPoint& b) {
    SopdeValue v;
    v.xi = b.y;
    v.w.assign(k, Eigen::MatrixXd::Constant(m, k, 0.7));
    return v;
  };
  SopdeSection bad = [m, k](const WhitneyPoint& b) {
    SopdeValue v;
    v.xi = Eigen::MatrixXd::Zero(m, k);
    v.w.assign(k, Eigen::MatrixXd::Zero(m, k));
    return v;
  };
  std::vector<WhitneyPoint> samples;
  for (int i = 0; i < 30; ++i) samples.push_back(rand_whitney(rng, n, m, k));
  CHECK(sopde_check(good, samples, 1e-12));
  CHECK_FALSE(sopde_check(bad, samples, 1e-12));
}

TEST_CASE("geometric and coefficient SOPDE criteria agree") {
  std::mt19937 rng(17);
  const int n = 1, m = 2, k = 2;
  for (int rep = 0; rep < 100; ++rep) {
    bool make_sopde = rep % 2 == 0;
    Eigen::MatrixXd offset = make_sopde ? Eigen::MatrixXd::Zero(m, k) : rand_mat(rng, m, k);
    if (!make_sopde && offset.cwiseAbs().maxCoeff() < 1e-3) offset.setConstant(0.5);
    SopdeSection xi = [m, k, offset](const WhitneyPoint& b) {
      SopdeValue v;
      v.xi = b.y + offset;
      v.w.assign(k, Eigen::MatrixXd::Random(m, k));
      return v;
    };
    std::vector<WhitneyPoint> samples;
    for (int i = 0; i < 3; ++i) samples.push_back(rand_whitney(rng, n, m, k));
    CHECK(sopde_check(xi, samples, 1e-10) == sopde_check_geometric(xi, samples, 1e-10));
  }
}

TEST_CASE("associated k-vector on the standard algebroid copies coefficients") {
  std::mt19937 rng(18);
  LieAlgebroid alg = standard_algebroid(2);
  WhitneyPoint b = rand_whitney(rng, 2, 2, 2);
  SopdeValue v;
  v.xi = b.y;
  v.w = {rand_mat(rng, 2, 2), rand_mat(rng, 2, 2)};
  Eigen::MatrixXd kv = associated_k_vector(alg, v, b);
  for (int A = 0; A < 2; ++A) {
    for (int i = 0; i < 2; ++i) CHECK(kv(i, A) == doctest::Approx(b.y(i, A)));
    for (int B = 0; B < 2; ++B)
      for (int a = 0; a < 2; ++a)
        CHECK(kv(flat_fiber_index(2, 2, a, B), A) ==
              doctest::Approx(v.w[static_cast<size_t>(A)](a, B)));
  }
}

TEST_CASE("associated k-vector over a point base has no q part") {
  std::mt19937 rng(19);
  LieAlgebroid alg = so3_algebroid();
  WhitneyPoint b = rand_whitney(rng, 0, 3, 2);
  SopdeValue v;
  v.xi = b.y;
  v.w = {rand_mat(rng, 3, 2), rand_mat(rng, 3, 2)};
  Eigen::MatrixXd kv = associated_k_vector(alg, v, b);
  CHECK(kv.rows() == 6);  // purely fiber directions
}

TEST_CASE("k = 1 liouville and endomorphism have single-column verticals") {
  std::mt19937 rng(20);
  WhitneyPoint b = rand_whitney(rng, 1, 3, 1);
  CHECK(liouville_section(b, 0).w.cols() == 1);
  ProlongedElement Z = testutil::rand_element(rng, b);
  CHECK(vertical_endomorphism(Z, 0).w.cols() == 1);
}
