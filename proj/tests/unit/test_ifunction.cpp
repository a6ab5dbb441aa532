#include "corpus.hpp"
#include "oracles.hpp"

#include "tlg/ifunction.hpp"

#include <set>
#include <doctest.h>

using namespace tlg;


TEST_CASE("I-function of P^N matches the classical series") {
  for (int N : {1, 2}) {
    CAPTURE(N);
    const int order = 4;
    auto ctx = make_context(corpus::picard_data(N == 1 ? "P1" : "P2"));
    LogSeries I = i_function(ctx, order);
    const GradedQuotientRing &R = ctx.ring();
    std::map<SeriesKey, RatVec> expected;
    for (const auto &[key, c] : oracle::projective_space_series(N, order)) {
      auto [d, j, hp] = key;
      SeriesKey sk{{d}, {j}, Rat(-d * (N + 1) - hp), 0};
      RatVec cls = R.to_class(R.variable(0).pow(hp).scaled(c));
      RatVec &slot = expected.try_emplace(sk, RatVec(R.dim(), 0)).first->second;
      for (std::size_t b = 0; b < cls.size(); ++b)
        slot[b] += cls[b];
    }
    std::map<SeriesKey, RatVec> actual;
    for (const auto &[key, c] : I.terms)
      if (!is_zero(c))
        actual.emplace(key, c);
    CHECK(actual == expected);
  }
}

TEST_CASE("mirror maps of P1 and P2 are the logarithm alone") {
  for (const char *name : {"P1", "P2"}) {
    CAPTURE(name);
    auto ctx = make_context(corpus::picard_data(name));
    MirrorMap mm = mirror_map(ctx, i_function(ctx, 6));
    CHECK(mm.shape_ok);
    CHECK(mm.values_in_h2);
    CHECK(mm.analytic.empty());
    REQUIRE(mm.log_part.size() == 1);
    CHECK(mm.log_part[0] == ctx.p_bar[0]);
    CHECK(mm.log_part[0] == ctx.ring().variable_class(0));
  }
}

TEST_CASE("twisted mirror map of P(1,1,2)") {
  auto ctx = make_context(corpus::picard_data("P112"));
  MirrorMap mm = mirror_map(ctx, i_function(ctx, 7));
  CHECK(mm.shape_ok);
  CHECK(mm.values_in_h2);
  RatVec one_v = ctx.ring().variable_class(3);
  for (int n = 0; 2 * n + 1 <= 7; ++n) {
    CAPTURE(n);
    auto it = mm.analytic.find({0, 2 * n + 1});
    REQUIRE(it != mm.analytic.end());
    RatVec expected = one_v;
    for (Rat &x : expected)
      x *= oracle::half_integer_mirror_coefficient(n);
    CHECK(it->second == expected);
  }
  CHECK(oracle::half_integer_mirror_coefficient(2) == Rat(3, 640));
  for (const auto &[beta, c] : mm.analytic)
    CHECK(beta[0] == 0);
}

TEST_CASE("mirror maps are stable under raising the truncation order") {
  for (const std::string &name : corpus::nef_corpus()) {
    CAPTURE(name);
    auto ctx = make_context(corpus::picard_data(name));
    MirrorMap a = mirror_map(ctx, i_function(ctx, 3));
    MirrorMap b = mirror_map(ctx, i_function(ctx, 4));
    CHECK(a.values_in_h2);
    CHECK(a.log_part == b.log_part);
    for (const auto &[beta, c] : a.analytic)
      CHECK(b.analytic.at(beta) == c);
    for (const auto &[beta, c] : b.analytic) {
      int deg = 0;
      for (int x : beta)
        deg += x;
      if (deg <= 3)
        CHECK(a.analytic.count(beta) == 1);
    }
  }
}

TEST_CASE("the GKZ operators annihilate I-tilde up to order 3") {
  for (const char *name : {"P1", "P2", "P112", "F2"}) {
    CAPTURE(name);
    auto pd = corpus::picard_data(name);
    auto ctx = make_context(pd);
    RelationFamilies fam = relation_families(*pd, ctx.coh);
    std::vector<LogDiffOp> ops{euler_check(*pd)};
    for (const auto *family : {&fam.basis, &fam.cone, &fam.primitive})
      for (const IntVec &l : *family)
        ops.push_back(box_X(*pd, l));
    int drop = 0;
    for (const LogDiffOp &op : ops)
      drop = std::max(drop, -order_shift(op));
    LogSeries tilde = tilde_I(ctx, i_function(ctx, 3 + drop));
    for (const LogDiffOp &op : ops) {
      AnnihilationReport rep = annihilation_check(ctx, op, tilde);
      CHECK(rep.valid_order >= 3);
      CHECK(rep.residual_terms == 0);
    }
  }
}

TEST_CASE("a wrong operator is caught") {
  auto pd = corpus::picard_data("P1");
  auto ctx = make_context(pd);
  LogSeries tilde = tilde_I(ctx, i_function(ctx, 3));
  LogDiffOp shifted = box_X(*pd, {1, 1}) + LogDiffOp::z(pd->r(), pd->ext().e());
  CHECK(annihilation_check(ctx, shifted, tilde).residual_terms > 0);
}

TEST_CASE("effective degrees are enumerated by total degree") {
  auto ctx = make_context(corpus::picard_data("P112"));
  auto degs = enumerate_degrees(ctx, 3);
  REQUIRE_FALSE(degs.empty());
  CHECK(degs.front().total == 0);
  for (std::size_t i = 1; i < degs.size(); ++i)
    CHECK(degs[i - 1].total <= degs[i].total);
  // The sector of a degree is a Box element.
  std::set<IntVec> box;
  for (const auto &b : box_elements(ctx.pd->ext().fan()))
    box.insert(b.v);
  for (const DegreeTerm &d : degs)
    CHECK(box.count(d.sector) == 1);
}
