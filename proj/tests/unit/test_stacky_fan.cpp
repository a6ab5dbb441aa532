#include "corpus.hpp"

#include "tlg/fan.hpp"

#include <doctest.h>

#include <set>

using namespace tlg;

namespace {

// Points of the half-open parallelepiped of each maximal cone, found by scanning a
// bounding box and solving for coordinates with Cramer's rule (2d and 3d only).
std::set<IntVec> brute_force_box(const StackyFan &f) {
  const std::size_t d = f.rank();
  std::set<IntVec> out;
  for (const IndexSet &cone : f.max_cones()) {
    IntVec lo(d, 0), hi(d, 0);
    for (std::size_t i : cone)
      for (std::size_t c = 0; c < d; ++c) {
        const Int &x = f.rays()[i][c];
        if (x < 0)
          lo[c] += x;
        else
          hi[c] += x;
      }
    RatMatrix M(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t c = 0; c < d; ++c)
        M(c, j) = f.rays()[cone[j]][c];
    auto det = [&](const RatMatrix &A) -> Rat {
      if (d == 1)
        return A(0, 0);
      if (d == 2)
        return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
      return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) - A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
             A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    };
    const Rat D = det(M);
    IntVec p = lo;
    while (true) {
      bool inside = true;
      for (std::size_t j = 0; j < d && inside; ++j) {
        RatMatrix Mj = M;
        for (std::size_t c = 0; c < d; ++c)
          Mj(c, j) = p[c];
        Rat t = det(Mj) / D;
        inside = t >= 0 && t < 1;
      }
      if (inside && !is_zero(p))
        out.insert(p);
      std::size_t c = 0;
      while (c < d && p[c] == hi[c])
        p[c] = lo[c], ++c;
      if (c == d)
        break;
      ++p[c];
    }
  }
  return out;
}

std::set<IntVec> library_box(const StackyFan &f) {
  std::set<IntVec> out;
  for (const BoxElement &b : box_elements(f))
    if (!is_zero(b.v))
      out.insert(b.v);
  return out;
}

} // namespace

TEST_CASE("Box agrees with a brute-force parallelepiped scan") {
  for (const char *name : {"P1", "P2", "P112", "P113", "P1113", "P1112", "F2", "F3"}) {
    CAPTURE(name);
    StackyFan f = corpus::fan(name);
    CHECK(library_box(f) == brute_force_box(f));
  }
}

TEST_CASE("Box, ages and Gen of weighted projective planes") {
  StackyFan p112 = corpus::fan("P112");
  auto box = box_elements(p112);
  std::vector<BoxElement> nonzero;
  for (const auto &b : box)
    if (!is_zero(b.v))
      nonzero.push_back(b);
  REQUIRE(nonzero.size() == 1);
  CHECK(nonzero[0].v == IntVec{0, -1});
  CHECK(nonzero[0].age == 1);
  CHECK(gen_elements(p112).size() == 1);

  StackyFan p113 = corpus::fan("P113");
  std::map<IntVec, Rat> ages;
  for (const auto &b : box_elements(p113))
    ages[b.v] = b.age;
  CHECK(ages.at({0, -1}) == Rat(2, 3));
  CHECK(ages.at({0, -2}) == Rat(4, 3));
  auto gen = gen_elements(p113);
  REQUIRE(gen.size() == 1);
  CHECK(gen[0].v == IntVec{0, -1});
}

TEST_CASE("validation diagnostics") {
  CHECK(validate(corpus::fan("P2")).ok());
  ValidationReport broken = validate(corpus::fan("broken"));
  CHECK_FALSE(broken.complete);
  CHECK_FALSE(broken.failures.empty());
  CHECK_THROWS_AS(require_valid(corpus::fan("broken")), Error);

  ValidationReport nonprim = validate(StackyFan(1, {{2}, {-1}}, {{0}, {1}}));
  CHECK_FALSE(nonprim.primitive);
  ValidationReport nonsimp = validate(StackyFan(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1, 2}, {0, 2, 3}}));
  CHECK_FALSE(nonsimp.simplicial);
}

TEST_CASE("walls, nefness and cone location") {
  CHECK(walls(corpus::fan("P2")).size() == 3);
  CHECK(walls(corpus::fan("F2")).size() == 4);
  CHECK(anticanonical_nef(corpus::fan("F2")));
  CHECK_FALSE(anticanonical_nef(corpus::fan("F3")));
  ConeLocation loc = locate(corpus::fan("P112"), {0, -1});
  CHECK(loc.cone == IndexSet{0, 1});
  CHECK(loc.coords == RatVec{Rat(1, 2), Rat(1, 2)});
  CHECK(minimal_cone(corpus::fan("P2"), {1, 0}) == IndexSet{0});
}

TEST_CASE("extended fan data") {
  auto ext = corpus::extended("P112");
  CHECK(ext->e() == 1);
  CHECK(ext->r() == 1);
  CHECK(ext->n() == 4);
  CHECK(ext->extra()[0] == IntVec{0, -1});
  CHECK(ext->degree(3) == 1);
  // The 𝕃 basis spans ker A.
  for (const IntVec &l : ext->lattice_basis())
    CHECK(is_zero(ext->A() * l));
  CHECK(ext->lattice_basis().size() == 2);
  CHECK_THROWS_AS(ExtendedStackyFan(corpus::fan("P112"), {{-1, -1}}), Error);
  CHECK_THROWS_AS(ExtendedStackyFan(corpus::fan("P113"), {{0, -2}}), Error);

  auto [A, Ae] = anticones(*ext);
  CHECK_FALSE(A.empty());
  CHECK(generalized_primitive_collections(*ext).size() >= 1);
}
