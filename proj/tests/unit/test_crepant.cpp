#include "corpus.hpp"

#include "tlg/cohomology.hpp"
#include "tlg/crepant.hpp"

#include <doctest.h>

using namespace tlg;

TEST_CASE("F2 is a crepant resolution of P(1,1,2)") {
  ResolutionPair pair = make_resolution_pair(corpus::fan("P112"), corpus::fan("F2_resolving_P112"));
  CrepancyReport rep = is_crepant(pair);
  CHECK(rep.crepant);
  REQUIRE(rep.witnesses.size() == 1);
  CHECK(rep.witnesses[0].ray == IntVec{0, -1});
  CHECK(rep.witnesses[0].cone == IndexSet{0, 1});
  CHECK(rep.witnesses[0].coords == RatVec{Rat(1, 2), Rat(1, 2)});
  CHECK(rep.witnesses[0].discrepancy == 0);
  CHECK(check_gen_equals_new_rays(pair).equal);
  CHECK(exceptional_not_in_kahler(pair).all_outside);

  // Same number of classes on both sides.
  auto hx = presentation(ExtendedStackyFan(corpus::fan("P112")));
  auto hz = presentation(ExtendedStackyFan(corpus::fan("F2_resolving_P112")));
  CHECK(hx.ring->dim() == 4);
  CHECK(hz.ring->dim() == 4);
}

TEST_CASE("the (-1,-1) subdivision is not crepant") {
  ResolutionPair pair = make_resolution_pair(corpus::fan("P112"), corpus::fan("P112_noncrepant"));
  CrepancyReport rep = is_crepant(pair);
  CHECK_FALSE(rep.crepant);
  REQUIRE(rep.witnesses.size() == 2);
  CHECK(rep.witnesses[0].discrepancy == 0);
  CHECK(rep.witnesses[1].ray == IntVec{-1, -1});
  CHECK(rep.witnesses[1].discrepancy == 1);
  GenComparison gen = check_gen_equals_new_rays(pair);
  CHECK_FALSE(gen.equal);
  CHECK(gen.only_in_new_rays == std::vector<IntVec>{{-1, -1}});
  CHECK_THROWS_AS(build_global_fan(pair), Error);
}

TEST_CASE("SL detection") {
  CHECK(check_SL(corpus::fan("P112")));
  CHECK(check_SL(corpus::fan("P1113")));
  CHECK_FALSE(check_SL(corpus::fan("P113")));
  CHECK(check_SL(corpus::fan("P2")));
}

TEST_CASE("resolution pairs are validated") {
  // Z must be smooth.
  CHECK_THROWS_AS(make_resolution_pair(corpus::fan("P2"), corpus::fan("P112")), Error);
  // The first rays of Z must be those of X.
  CHECK_THROWS_AS(make_resolution_pair(corpus::fan("P112"), corpus::fan("F2")), Error);
}

TEST_CASE("global moduli fan for P(1,1,2) and F2") {
  ResolutionPair pair = make_resolution_pair(corpus::fan("P112"), corpus::fan("F2_resolving_P112"));
  GlobalModuliFan g = build_global_fan(pair);
  CHECK(g.rank == 2);
  CHECK(g.P.row(0) == g.Q.row(0));
  CHECK(g.Q.row(1) == IntVec{2, 0});
  CHECK(abs(determinant(g.transition)) == 1);
  CHECK(g.datasets_coincide);
  CHECK(g.face_in_C_X.is_face);
  CHECK(g.face_in_C_Z.is_face);
  CHECK(cone_dimension(g.intersection) == 1);
  CHECK(g.kahler_X_in_intersection);
  CHECK(g.kahler_X_face_of_kahler_Z.is_face);
  CHECK_FALSE(g.single_cone);
  // Certificates: ℓ >= 0 on the generators of each cone, zero on the common face.
  for (const RatVec &v : cone_generators(g.C_X))
    CHECK(dot(g.face_in_C_X.functional, v) >= 0);
  for (const RatVec &v : cone_generators(g.intersection)) {
    CHECK(dot(g.face_in_C_X.functional, v) == 0);
    CHECK(dot(g.face_in_C_Z.functional, v) == 0);
  }

  auto bad = check_basis_q(g.P, IntMatrix::from_rows({{0, 1}, {4, 0}}, 2), 1, g.kahler_Z);
  CHECK_FALSE(bad.empty());
}

TEST_CASE("a smooth X is its own resolution with a single chamber") {
  ResolutionPair pair = make_resolution_pair(corpus::fan("P2"), corpus::fan("P2"));
  CHECK(is_crepant(pair).crepant);
  GlobalModuliFan g = build_global_fan(pair);
  CHECK(g.single_cone);
}
