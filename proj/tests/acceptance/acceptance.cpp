// Acceptance suite: one PASS/FAIL line per criterion. All comparisons are exact
// (tolerance 0); the time budgets are 60 s per criterion and 300 s for annihilation.
// Optional argv[1]: path of the command-line tool, used for the determinism check.

#include "corpus.hpp"
#include "oracles.hpp"

#include "tlg/crepant.hpp"
#include "tlg/ifunction.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace tlg;

namespace {

const std::vector<std::string> kCorpus{"P1", "P2", "P112", "P1113", "F2"};

struct Verdict {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string &what) {
    if (!cond) {
      if (ok)
        note << "failed: ";
      else
        note << "; ";
      note << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string &name, double budget_s, const std::function<void(Verdict &)> &body) {
  Verdict v;
  auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception &e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s)
    v.require(false, "time budget exceeded");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fs", secs);
  std::cout << (v.ok ? "PASS" : "FAIL") << " [" << id << "] " << name << " (" << buf << ")";
  if (!v.ok)
    std::cout << " " << v.note.str();
  std::cout << std::endl;
  if (!v.ok)
    ++failures;
}

std::vector<IntVec> random_lattice_vectors(const ExtendedStackyFan &ext, std::mt19937 &rng, std::size_t count,
                                           int bound) {
  std::uniform_int_distribution<int> coef(-bound, bound);
  std::vector<IntVec> out;
  while (out.size() < count) {
    IntVec l(ext.n(), 0);
    for (const IntVec &b : ext.lattice_basis()) {
      int s = coef(rng);
      for (std::size_t i = 0; i < l.size(); ++i)
        l[i] += s * b[i];
    }
    if (!is_zero(l))
      out.push_back(l);
  }
  return out;
}

std::string capture(const std::string &cmd) {
  std::string out;
  FILE *p = popen(cmd.c_str(), "r");
  if (!p)
    return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0)
    out.append(buf, n);
  pclose(p);
  return out;
}

} // namespace

int main(int argc, char **argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "rank identity: dim H*_orb = vol(Q) = dim residue algebra", 60, [](Verdict &v) {
    for (const std::string &name : kCorpus) {
      auto pd = corpus::picard_data(name);
      OrbifoldCohomology coh = presentation(pd->ext());
      ResidueComparison cmp = compare_with_cohomology(residue_algebra(*pd, coh), coh);
      Int vol = normalized_volume(pd->ext());
      v.require(coh.ring->finite(), name + ": presentation infinite");
      v.require(cmp.cohomology_dim && Int(*cmp.cohomology_dim) == vol, name + ": dim H != vol");
      v.require(cmp.residue_dim && cmp.residue_dim == cmp.cohomology_dim, name + ": residue dim differs");
      v.require(vol == oracle::determinant_sum(pd->ext().fan()), name + ": vol differs from Σ|det|");
      v.require(cmp.isomorphic, name + ": residue algebra not isomorphic");
      v.require(oracle::staircase_dims(*coh.ring, 5) == coh.ring->graded_dims(), name + ": staircase mismatch");
    }
    auto coh = presentation(*corpus::extended("P112"));
    std::map<Rat, std::size_t> dims{{0, 1}, {1, 2}, {2, 1}};
    v.require(coh.ring->dim() == 4 && coh.ring->graded_dims() == dims, "P112 graded dims are not (1,2,1)");
  });

  criterion(2, "Box bijection: v(d_v) = v and v(d + l) = v(d)", 60, [](Verdict &v) {
    std::mt19937 rng(20240601);
    for (const std::string &name : kCorpus) {
      auto pd = corpus::picard_data(name);
      MoriData mori = mori_lattices(pd);
      auto table = box_coset_map(mori);
      v.require(table.size() == box_elements(pd->ext().fan()).size(), name + ": table size");
      for (const BoxCosetEntry &b : table) {
        RatVec c = to_rat(b.pairings);
        v.require(mori.ceiling_map(c) == b.v, name + ": round trip");
        for (const IntVec &l : random_lattice_vectors(pd->ext(), rng, 10, 4)) {
          RatVec shifted = c;
          for (std::size_t a = 0; a < pd->k(); ++a)
            shifted[a] += Rat(dot(pd->lifts.row(a), l));
          v.require(mori.ceiling_map(shifted) == b.v, name + ": not L-periodic");
        }
      }
    }
  });

  criterion(3, "rho membership: LP verdict = degree criterion", 60, [](Verdict &v) {
    for (const std::string &name : {"P1", "P2", "P112", "P1113", "F2", "F3", "P1112"}) {
      RhoMembership rm = rho_membership(extended_pl_and_pic(corpus::extended(name)));
      v.require(rm.via_lp == rm.via_degree, name + ": verdicts differ");
      bool expected = name != std::string("F3") && name != std::string("P1112");
      v.require(rm.via_lp == expected, name + ": unexpected verdict");
    }
  });

  criterion(4, "operator factorization: prefactor · box^X = box-tilde", 60, [](Verdict &v) {
    std::mt19937 rng(4242);
    for (const std::string &name : kCorpus) {
      auto pd = corpus::picard_data(name);
      std::vector<IntVec> rels = pd->ext().lattice_basis();
      for (const IntVec &l : random_lattice_vectors(pd->ext(), rng, 20, 2))
        rels.push_back(l);
      for (const IntVec &l : rels) {
        LogDiffOp residual = box_tilde(*pd, l) - factorization_prefactor(*pd, l) * box_X(*pd, l);
        v.require(residual.is_zero(), name + ": nonzero residual");
      }
    }
  });

  criterion(5, "symbol fiber finite and sensitive to each generator family", 60, [](Verdict &v) {
    for (const std::string &name : kCorpus) {
      auto pd = corpus::picard_data(name);
      FamilySensitivity s = symbol_fiber_sensitivity(*pd, presentation(pd->ext()));
      v.require(s.full.has_value(), name + ": fiber infinite");
      v.require(s.sensitive, name + ": no family removal changes the fiber");
    }
  });

  criterion(6, "annihilation of I-tilde up to chi-order 3", 300, [](Verdict &v) {
    for (const std::string &name : {"P1", "P2", "P112"}) {
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
        v.require(rep.valid_order >= 3, std::string(name) + ": valid order below 3");
        v.require(rep.residual_terms == 0, std::string(name) + ": residual " + op.to_string());
      }
    }
  });

  criterion(7, "mirror map shape, classical values and truncation stability", 60, [](Verdict &v) {
    for (int N : {1, 2}) {
      const std::string name = N == 1 ? "P1" : "P2";
      auto ctx = make_context(corpus::picard_data(name));
      LogSeries I = i_function(ctx, 6);
      const GradedQuotientRing &R = ctx.ring();
      std::map<SeriesKey, RatVec> expected, actual;
      for (const auto &[key, c] : oracle::projective_space_series(N, 6)) {
        auto [d, j, hp] = key;
        RatVec cls = R.to_class(R.variable(0).pow(hp).scaled(c));
        RatVec &slot = expected.try_emplace(SeriesKey{{d}, {j}, Rat(-d * (N + 1) - hp), 0}, RatVec(R.dim(), 0))
                           .first->second;
        for (std::size_t b = 0; b < cls.size(); ++b)
          slot[b] += cls[b];
      }
      for (const auto &[key, c] : I.terms)
        if (!is_zero(c))
          actual.emplace(key, c);
      v.require(actual == expected, name + ": I differs from the classical series");
      MirrorMap mm = mirror_map(ctx, I);
      v.require(mm.shape_ok && mm.analytic.empty(), name + ": tau has analytic corrections");
      v.require(mm.log_part.size() == 1 && mm.log_part[0] == R.variable_class(0), name + ": tau != p1 log chi1");
    }
    for (const std::string &name : kCorpus) {
      auto ctx = make_context(corpus::picard_data(name));
      MirrorMap a = mirror_map(ctx, i_function(ctx, 3));
      MirrorMap b = mirror_map(ctx, i_function(ctx, 4));
      v.require(a.shape_ok && a.values_in_h2 && b.values_in_h2, name + ": tau not in H^2");
      bool stable = a.log_part == b.log_part;
      for (const auto &[beta, c] : a.analytic)
        stable = stable && b.analytic.count(beta) && b.analytic.at(beta) == c;
      v.require(stable, name + ": truncation N=3 vs 4 unstable");
    }
    auto ctx = make_context(corpus::picard_data("P112"));
    MirrorMap mm = mirror_map(ctx, i_function(ctx, 5));
    for (int n = 0; 2 * n + 1 <= 5; ++n) {
      RatVec expected = ctx.ring().variable_class(3);
      for (Rat &x : expected)
        x *= oracle::half_integer_mirror_coefficient(n);
      auto it = mm.analytic.find({0, 2 * n + 1});
      v.require(it != mm.analytic.end() && it->second == expected, "P112 twisted mirror map coefficient");
    }
  });

  criterion(8, "crepant suite: F2 over P(1,1,2), SL checks, global moduli fan", 60, [](Verdict &v) {
    ResolutionPair pair = make_resolution_pair(corpus::fan("P112"), corpus::fan("F2_resolving_P112"));
    CrepancyReport rep = is_crepant(pair);
    v.require(rep.crepant && rep.witnesses.size() == 1 && rep.witnesses[0].discrepancy == 0, "F2 not crepant");
    v.require(check_gen_equals_new_rays(pair).equal, "Gen != new rays");
    v.require(exceptional_not_in_kahler(pair).all_outside, "exceptional class in the Kähler cone");
    ResolutionPair sub = make_resolution_pair(corpus::fan("P112"), corpus::fan("P112_noncrepant"));
    CrepancyReport bad = is_crepant(sub);
    bool found = false;
    for (const CrepancyWitness &w : bad.witnesses)
      found = found || (w.ray == IntVec{-1, -1} && w.discrepancy == 1);
    v.require(!bad.crepant && found, "(-1,-1) subdivision not flagged with discrepancy 1");
    v.require(check_SL(corpus::fan("P112")), "P112 not SL");
    v.require(!check_SL(corpus::fan("P113")), "P113 reported SL");
    auto hx = presentation(ExtendedStackyFan(corpus::fan("P112")));
    auto hz = presentation(ExtendedStackyFan(corpus::fan("F2_resolving_P112")));
    v.require(hx.ring->dim() == 4 && hz.ring->dim() == 4, "dimensions differ from 4");
    GlobalModuliFan g = build_global_fan(pair);
    v.require(g.face_in_C_X.is_face && g.face_in_C_Z.is_face, "C_X ∩ C_Z not a common face");
    for (const RatVec &x : cone_generators(g.C_X))
      v.require(dot(g.face_in_C_X.functional, x) >= 0, "certificate negative on C_X");
    for (const RatVec &x : cone_generators(g.C_Z))
      v.require(dot(g.face_in_C_Z.functional, x) >= 0, "certificate negative on C_Z");
    for (const RatVec &x : cone_generators(g.intersection))
      v.require(dot(g.face_in_C_X.functional, x) == 0 && dot(g.face_in_C_Z.functional, x) == 0,
                "certificate nonzero on the face");
    v.require(g.kahler_X_in_intersection && g.kahler_X_face_of_kahler_Z.is_face, "Kähler cone of X misplaced");
    v.require(abs(determinant(g.transition)) == 1, "transition not unimodular");
  });

  criterion(9, "unfolding conditions IC, GC, EC", 60, [](Verdict &v) {
    for (const std::string &name : kCorpus) {
      auto pd = corpus::picard_data(name);
      UnfoldingReport u = check_unfolding_conditions(residue_algebra(*pd, presentation(pd->ext())));
      v.require(u.ic && u.gc && u.ec, name + ": unfolding condition fails");
    }
    // The crepant-resolvable case is generated by H².
    auto pd = corpus::picard_data("P112");
    UnfoldingReport u = check_unfolding_conditions(residue_algebra(*pd, presentation(pd->ext())));
    v.require(u.generated_dim == u.dim, "P112 not H^2-generated");
  });

  criterion(10, "determinism: `all` byte-identical across 3 runs", 60, [&cli](Verdict &v) {
    for (const std::string &name : kCorpus) {
      io::Options o;
      o.command = "all";
      o.fan_text = corpus::read_file(name + ".json");
      std::string first;
      for (int i = 0; i < 3; ++i) {
        io::Outcome out = io::run(o);
        v.require(out.exit_code == 0, name + ": `all` failed");
        std::string s = io::dump(out.report);
        if (i == 0)
          first = s;
        else
          v.require(s == first, name + ": in-process output differs");
      }
      if (!cli.empty()) {
        const std::string cmd = "'" + cli + "' all '" + std::string(TLG_DATA_DIR) + "/" + name + ".json'";
        std::string a = capture(cmd), b = capture(cmd), c = capture(cmd);
        v.require(!a.empty() && a == b && b == c, name + ": CLI output differs");
        v.require(a == first, name + ": CLI and in-process reports differ");
      }
    }
  });

  return failures == 0 ? 0 : 1;
}
