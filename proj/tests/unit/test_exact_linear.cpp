#include "tlg/cone.hpp"
#include "tlg/linalg.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace tlg;

namespace {

IntMatrix random_matrix(std::mt19937 &rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      M(i, j) = d(rng);
  return M;
}

} // namespace

TEST_CASE("smith normal form: U M V = S, unimodular transforms, divisibility chain") {
  std::mt19937 rng(7);
  for (int t = 0; t < 30; ++t) {
    IntMatrix M = random_matrix(rng, 3, 4, 6);
    SNFDecomposition snf = smith_normal_form(M);
    IntMatrix prod = snf.U * M * snf.V;
    CHECK(prod == snf.S);
    CHECK(abs(determinant(snf.U)) == 1);
    CHECK(abs(determinant(snf.V)) == 1);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j)
          CHECK(snf.S(i, j) == 0);
    IntVec f = snf.invariant_factors();
    for (std::size_t i = 1; i < f.size(); ++i)
      CHECK(f[i] % f[i - 1] == 0);
  }
}

TEST_CASE("determinant agrees with cofactor expansion") {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    IntMatrix M = random_matrix(rng, 4, 4, 5);
    CHECK(determinant(M) == oracle::cofactor_det(M));
  }
}

TEST_CASE("kernel basis spans the integer kernel") {
  // x1 = x3 and 2x2 = 2x3, so the kernel is ℤ(1,1,1).
  IntMatrix A = IntMatrix::from_rows({{1, 0, -1}, {0, 2, -2}}, 3);
  auto K = kernel_basis(A);
  REQUIRE(K.size() == 1);
  CHECK((K[0] == IntVec{1, 1, 1} || K[0] == IntVec{-1, -1, -1}));

  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    IntMatrix M = random_matrix(rng, 2, 5, 4);
    auto B = kernel_basis(M);
    CHECK(B.size() == 5 - rank(M));
    for (const IntVec &k : B)
      CHECK(is_zero(M * k));
    // Saturation: the basis is primitive as a lattice, so saturating it changes nothing.
    CHECK(hermite_basis(saturate(B, 5), 5) == hermite_basis(B, 5));
  }
}

TEST_CASE("splitting maps of a ray matrix") {
  IntMatrix A = IntMatrix::from_cols({{1, 0}, {-1, -2}, {0, 1}, {0, -1}}, 2);
  Splitting s = splitting_maps(A);
  CHECK(is_zero(A * s.t.col(0)));
  CHECK(A * s.g == IntMatrix::identity(2));
  CHECK(s.s * s.t == IntMatrix::identity(s.t.cols()));
  CHECK(cokernel_factors(IntMatrix::from_cols({{2, 0}, {0, 2}}, 2)) == IntVec{2, 2});
}

TEST_CASE("exact simplex") {
  // min -x - y s.t. x + 2y <= 4, 3x + y <= 6 → optimum at (8/5, 6/5).
  LinearProgram lp(2);
  lp.add({1, 2}, Relation::LessEq, 4);
  lp.add({3, 1}, Relation::LessEq, 6);
  lp.objective = {-1, -1};
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::Optimal);
  CHECK(r.x[0] == Rat(8, 5));
  CHECK(r.x[1] == Rat(6, 5));
  CHECK(r.value == Rat(-14, 5));

  LinearProgram inf(1);
  inf.add({1}, Relation::GreaterEq, 2);
  inf.add({1}, Relation::LessEq, 1);
  CHECK(solve_lp(inf).status == LPResult::Status::Infeasible);
}

TEST_CASE("cones: membership, faces, intersection") {
  RationalCone quad = RationalCone::from_generators(2, {{1, 0}, {0, 1}});
  RationalCone ray = RationalCone::from_generators(2, {{1, 0}});
  RationalCone diag = RationalCone::from_generators(2, {{1, 1}});
  CHECK(cone_contains(quad, {3, 5}));
  CHECK_FALSE(cone_contains(quad, {-1, 5}));
  FaceCertificate f = face_certificate(ray, quad);
  CHECK(f.is_face);
  CHECK(dot(f.functional, RatVec{1, 0}) == 0);
  CHECK(dot(f.functional, RatVec{0, 1}) > 0);
  CHECK_FALSE(face_certificate(diag, quad).is_face);

  RationalCone other = RationalCone::from_generators(2, {{1, 0}, {1, -1}});
  RationalCone meet = intersect(quad, other);
  CHECK(cone_dimension(meet) == 1);
  CHECK(cone_contains(meet, {2, 0}));
  CHECK(extreme_rays(with_h_description(quad)) == std::vector<IntVec>{{0, 1}, {1, 0}});
}
