#include "tlg/io.hpp"

#include "tlg/cohomology.hpp"
#include "tlg/operators.hpp"
#include "tlg/picard.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <set>

namespace tlg::io {

namespace {

constexpr const char *kVersion = "0.1.0";

[[noreturn]] void schema_error(const std::string &pointer, const std::string &msg) {
  fail_validation("schema error at " + (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

Int json_int(const Json &j, const std::string &ptr) {
  if (!j.is_number_integer())
    schema_error(ptr, "expected an integer");
  if (j.is_number_unsigned())
    return Int(j.get<unsigned long>());
  return Int(j.get<long>());
}

IntVec json_int_vec(const Json &j, const std::string &ptr, std::optional<std::size_t> len) {
  if (!j.is_array())
    schema_error(ptr, "expected an array of integers");
  if (len && j.size() != *len)
    schema_error(ptr, "expected " + std::to_string(*len) + " entries, got " + std::to_string(j.size()));
  IntVec v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(json_int(j[i], ptr + "/" + std::to_string(i)));
  return v;
}

std::vector<IntVec> json_int_rows(const Json &j, const std::string &ptr, std::optional<std::size_t> len) {
  if (!j.is_array())
    schema_error(ptr, "expected an array of integer vectors");
  std::vector<IntVec> rows;
  for (std::size_t i = 0; i < j.size(); ++i)
    rows.push_back(json_int_vec(j[i], ptr + "/" + std::to_string(i), len));
  return rows;
}

Json rows_json(const IntMatrix &M) {
  Json out = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i)
    out.push_back(int_vec_json(M.row(i)));
  return out;
}

Json rows_json(const RatMatrix &M) {
  Json out = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i)
    out.push_back(rat_vec_json(M.row(i)));
  return out;
}

Json rows_json(const std::vector<IntVec> &rows) {
  Json out = Json::array();
  for (const IntVec &v : rows)
    out.push_back(int_vec_json(v));
  return out;
}

Json cone_json(const RationalCone &C, bool certificates) {
  Json j;
  j["dim"] = C.dim;
  Json rays = Json::array();
  for (const RatVec &g : cone_generators(C))
    rays.push_back(int_vec_json(primitive_integer_multiple(g)));
  j["rays"] = rays;
  if (certificates) {
    RationalCone H = with_h_description(C);
    Json ineq = Json::array(), eq = Json::array();
    for (const RatVec &a : H.inequalities)
      ineq.push_back(rat_vec_json(a));
    for (const RatVec &a : H.equations)
      eq.push_back(rat_vec_json(a));
    j["inequalities"] = ineq;
    j["equations"] = eq;
  }
  return j;
}

Json face_json(const FaceCertificate &f) {
  Json j;
  j["is_face"] = f.is_face;
  j["functional"] = rat_vec_json(f.functional);
  return j;
}

Json box_element_json(const BoxElement &b) {
  Json j;
  j["v"] = int_vec_json(b.v);
  j["cone"] = index_set_json(b.cone);
  j["coords"] = rat_vec_json(b.coords);
  j["age"] = rat_json(b.age);
  return j;
}

std::string class_string(const GradedQuotientRing &ring, const RatVec &c) {
  return ring.from_class(c).to_string(ring.names());
}

std::string poly_string(const Polynomial &p, const std::vector<std::string> &names) { return p.to_string(names); }

Json dim_json(const std::optional<std::size_t> &d) { return d ? Json(*d) : Json(nullptr); }

/// Everything downstream of the fan, built on demand.
class Pipeline {
public:
  Pipeline(FanDocument doc) : doc_(std::move(doc)) {}

  const FanDocument &doc() const { return doc_; }
  const std::shared_ptr<const ExtendedStackyFan> &ext() {
    if (!ext_)
      ext_ = extended_fan(doc_);
    return ext_;
  }
  const PicardLattices &pic() {
    if (!pic_)
      pic_ = extended_pl_and_pic(ext());
    return *pic_;
  }
  const std::shared_ptr<const ExtendedPicardData> &pd() {
    if (!pd_)
      pd_ = std::make_shared<const ExtendedPicardData>(choose_basis_p(pic(), doc_.p_basis));
    return pd_;
  }
  const OrbifoldCohomology &coh() {
    if (!coh_)
      coh_ = presentation(*ext());
    return *coh_;
  }
  const IContext &ctx() {
    if (!ctx_)
      ctx_ = make_context(pd());
    return *ctx_;
  }
  const RelationFamilies &families() {
    if (!fam_)
      fam_ = relation_families(*pd(), coh());
    return *fam_;
  }

private:
  FanDocument doc_;
  std::shared_ptr<const ExtendedStackyFan> ext_;
  std::optional<PicardLattices> pic_;
  std::shared_ptr<const ExtendedPicardData> pd_;
  std::optional<OrbifoldCohomology> coh_;
  std::optional<IContext> ctx_;
  std::optional<RelationFamilies> fam_;
};

// --- command bodies -------------------------------------------------------

Json cmd_validate(const FanDocument &doc, bool &ok) {
  ValidationReport v = validate(doc.fan);
  ok = v.ok();
  Json j;
  j["rank"] = doc.fan.rank();
  j["num_rays"] = doc.fan.num_rays();
  j["num_max_cones"] = doc.fan.max_cones().size();
  j["simplicial"] = v.simplicial;
  j["complete"] = v.complete;
  j["primitive"] = v.primitive;
  j["valid"] = ok;
  j["failures"] = v.failures;
  if (ok) {
    j["num_walls"] = walls(doc.fan).size();
    j["anticanonical_nef"] = anticanonical_nef(doc.fan);
  }
  return j;
}

Json cmd_box(Pipeline &p) {
  const ExtendedStackyFan &ext = *p.ext();
  Json j;
  Json box = Json::array(), gen = Json::array(), extra = Json::array();
  for (const BoxElement &b : box_elements(ext.fan()))
    box.push_back(box_element_json(b));
  for (const BoxElement &b : gen_elements(ext.fan()))
    gen.push_back(box_element_json(b));
  for (std::size_t k = 0; k < ext.e(); ++k)
    extra.push_back(box_element_json(ext.extra_box(k)));
  j["box"] = box;
  j["gen"] = gen;
  j["extra_generators"] = extra;
  j["extra_generators_default"] = !p.doc().extra_generators.has_value();
  return j;
}

Json cmd_cohomology(Pipeline &p, bool certs) {
  const OrbifoldCohomology &coh = p.coh();
  const GradedQuotientRing &ring = *coh.ring;
  Json j;
  j["variables"] = ring.names();
  Json degs = Json::array();
  for (const Rat &d : ring.variable_degrees())
    degs.push_back(rat_json(d));
  j["degrees"] = degs;
  auto polys = [&](const std::vector<Polynomial> &ps) {
    Json a = Json::array();
    for (const Polynomial &f : ps)
      a.push_back(poly_string(f, ring.names()));
    return a;
  };
  j["generators"]["cone_binomials"] = polys(coh.cone_binomials);
  j["generators"]["euler_forms"] = polys(coh.euler_forms);
  j["generators"]["gp_monomials"] = polys(coh.gp_monomials);
  j["finite"] = ring.finite();
  if (ring.finite()) {
    Json basis = Json::array();
    for (std::size_t b = 0; b < ring.basis().size(); ++b) {
      Json m;
      m["monomial"] = Polynomial::monomial(ring.order(), ring.basis()[b]).to_string(ring.names());
      m["degree"] = rat_json(ring.basis_degrees()[b]);
      basis.push_back(m);
    }
    j["standard_monomials"] = basis;
    Json gd = Json::array();
    for (const auto &[deg, n] : ring.graded_dims())
      gd.push_back(Json{{"degree", rat_json(deg)}, {"dim", n}});
    j["graded_dims"] = gd;
    j["dim"] = ring.dim();
    j["c1"] = class_string(ring, first_chern_class(*p.ext(), ring));
  }
  try {
    j["normalized_volume"] = int_json(normalized_volume(*p.ext()));
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::Validation)
      throw;
    j["normalized_volume"] = nullptr;
    j["normalized_volume_note"] = e.what();
  }
  j["groebner_size"] = ring.groebner().size();
  if (certs)
    j["certificates"]["groebner_basis"] = polys(ring.groebner());
  return j;
}

Json cmd_picard(Pipeline &p, bool certs) {
  const ExtendedStackyFan &ext = *p.ext();
  const PicardLattices &pic = p.pic();
  Json j;
  j["n"] = ext.n();
  j["m"] = ext.m();
  j["e"] = ext.e();
  j["r"] = ext.r();
  j["k"] = pic.k;
  j["lattice_basis"] = rows_json(ext.lattice_basis());
  j["divisor_classes"] = rows_json(pic.divisor_classes);
  j["pl_basis"] = rows_json(pic.pl_basis);
  j["pl_extended_basis"] = rows_json(pic.pl_ext_basis);
  j["theta_pic_basis"] = rows_json(pic.theta_pic_basis);
  j["pic_extended_basis"] = rows_json(pic.pic_ext_basis);
  j["kahler_cone"] = cone_json(pic.kahler, certs);
  j["extended_kahler_cone"] = cone_json(extended_kahler_cone(pic), certs);
  j["rho"] = int_vec_json(pic.rho);
  j["rho_bar"] = rat_vec_json(pic.rho_bar);
  RhoMembership rm = rho_membership(pic);
  j["rho_membership"] = {{"via_lp", rm.via_lp},
                         {"via_degree", rm.via_degree},
                         {"nef", rm.nef},
                         {"ages_at_most_one", rm.ages_at_most_one}};
  const ExtendedPicardData &pd = *p.pd();
  j["p_basis"] = rows_json(pd.P);
  j["p_lifts"] = rows_json(pd.lifts);
  j["p_user_supplied"] = pd.user_supplied;
  j["divisors_in_p"] = rows_json(pd.M);
  j["rho_in_p"] = rat_vec_json(pd.rho_in_p);
  MoriData mori = mori_lattices(p.pd());
  Json table = Json::array();
  for (const BoxCosetEntry &b : box_coset_map(mori))
    table.push_back({{"v", int_vec_json(b.v)},
                     {"decomposition", int_vec_json(b.decomposition)},
                     {"relation", rat_vec_json(b.relation)},
                     {"pairings", int_vec_json(b.pairings)}});
  j["box_coset_map"] = table;
  return j;
}

Json cmd_superpotential(Pipeline &p) {
  Json terms = Json::array();
  for (const SuperpotentialTerm &t : superpotential(*p.pd()))
    terms.push_back({{"coefficient", rat_json(t.coefficient)},
                     {"chi_exponent", int_vec_json(t.chi_exponent)},
                     {"y_exponent", int_vec_json(t.y_exponent)}});
  Json j;
  j["terms"] = terms;
  return j;
}

std::vector<std::pair<std::string, IntVec>> labelled_relations(const RelationFamilies &fam) {
  std::vector<std::pair<std::string, IntVec>> out;
  for (const IntVec &l : fam.basis)
    out.emplace_back("basis", l);
  for (const IntVec &l : fam.cone)
    out.emplace_back("cone", l);
  for (const IntVec &l : fam.primitive)
    out.emplace_back("primitive", l);
  return out;
}

Json cmd_gkz(Pipeline &p) {
  const ExtendedPicardData &pd = *p.pd();
  const RelationFamilies &fam = p.families();
  ResidueAlgebra res = residue_algebra(pd, p.coh());
  const auto names = res.ring->names();
  Json j;
  Json rels = Json::array();
  for (const auto &[family, l] : labelled_relations(fam)) {
    LogDiffOp op = box_X(pd, l);
    rels.push_back({{"family", family},
                    {"relation", int_vec_json(l)},
                    {"operator", operator_json(op)},
                    {"limit", poly_string(symbol(degenerate_limit(pd, op)), symbol_names(pd.k()))}});
  }
  j["relations"] = rels;
  Json pcs = Json::array();
  for (const IndexSet &I : fam.primitive_collections)
    pcs.push_back(index_set_json(I));
  j["primitive_collections"] = pcs;
  j["euler_operator"] = operator_json(euler_check(pd));
  Json relations = Json::array();
  for (const Polynomial &f : res.relations)
    relations.push_back(poly_string(f, names));
  j["residue_algebra"]["variables"] = names;
  j["residue_algebra"]["relations"] = relations;
  ResidueComparison cmp = compare_with_cohomology(res, p.coh());
  j["residue_algebra"]["dim"] = dim_json(cmp.residue_dim);
  j["residue_algebra"]["cohomology_dim"] = dim_json(cmp.cohomology_dim);
  j["residue_algebra"]["well_defined"] = cmp.well_defined;
  j["residue_algebra"]["graded_dims_agree"] = cmp.graded_dims_agree;
  j["residue_algebra"]["isomorphic"] = cmp.isomorphic;
  FamilySensitivity sens = symbol_fiber_sensitivity(pd, p.coh());
  j["symbol_fiber"]["dim"] = dim_json(sens.full);
  Json without = Json::array();
  for (const auto &[mask, d] : sens.without)
    without.push_back({{"dropped", mask == FamilyBasis ? "basis" : mask == FamilyCone ? "cone" : "primitive"},
                       {"dim", dim_json(d)}});
  j["symbol_fiber"]["without_family"] = without;
  j["symbol_fiber"]["sensitive"] = sens.sensitive;
  if (cmp.residue_dim) {
    UnfoldingReport u = check_unfolding_conditions(res);
    j["unfolding"] = {{"ic", u.ic}, {"gc", u.gc}, {"ec", u.ec}, {"generated_dim", u.generated_dim}, {"dim", u.dim}};
  }
  return j;
}

Json cmd_ifunction(Pipeline &p, int order) {
  const IContext &ctx = p.ctx();
  LogSeries I = i_function(ctx, order);
  Json j;
  j["order"] = order;
  j["basis"] = Json::array();
  for (const Monomial &m : ctx.ring().basis())
    j["basis"].push_back(Polynomial::monomial(ctx.ring().order(), m).to_string(ctx.ring().names()));
  j["series"] = series_json(I, ctx.ring());
  return j;
}

Json mirror_map_json(const IContext &ctx, const MirrorMap &mm) {
  Json j;
  j["order"] = mm.order;
  Json logs = Json::array();
  for (const RatVec &c : mm.log_part)
    logs.push_back(class_string(ctx.ring(), c));
  j["log_part"] = logs;
  Json an = Json::array();
  for (const auto &[beta, c] : mm.analytic)
    an.push_back({{"chi", beta}, {"class", class_string(ctx.ring(), c)}, {"coords", rat_vec_json(c)}});
  j["analytic"] = an;
  j["shape_ok"] = mm.shape_ok;
  j["values_in_h2"] = mm.values_in_h2;
  j["problems"] = mm.problems;
  return j;
}

/// Analytic parts agree on χ-degrees <= the smaller order.
bool truncation_stable(const MirrorMap &a, const MirrorMap &b) {
  const int n = std::min(a.order, b.order);
  auto cut = [n](const MirrorMap &m) {
    std::map<std::vector<int>, RatVec> out;
    for (const auto &[beta, c] : m.analytic) {
      int deg = 0;
      for (int x : beta)
        deg += x;
      if (deg <= n && !is_zero(c))
        out.emplace(beta, c);
    }
    return out;
  };
  return a.log_part == b.log_part && cut(a) == cut(b);
}

Json resolution_report(const ResolutionPair &pair, const std::optional<std::vector<IntVec>> &q, bool certs,
                       bool with_global, bool &ok) {
  Json j;
  CrepancyReport crep = is_crepant(pair);
  j["crepant"] = crep.crepant;
  Json wit = Json::array();
  for (const CrepancyWitness &w : crep.witnesses)
    wit.push_back({{"ray", int_vec_json(w.ray)},
                   {"cone", index_set_json(w.cone)},
                   {"coords", rat_vec_json(w.coords)},
                   {"degree", rat_json(w.degree)},
                   {"discrepancy", rat_json(w.discrepancy)}});
  j["witnesses"] = wit;
  bool sl = check_SL(pair.X);
  j["sl"] = sl;
  GenComparison gen = check_gen_equals_new_rays(pair);
  j["gen_equals_new_rays"] = gen.equal;
  j["only_in_gen"] = rows_json(gen.only_in_gen);
  j["only_in_new_rays"] = rows_json(gen.only_in_new_rays);
  ExceptionalReport exc = exceptional_not_in_kahler(pair);
  j["exceptional_outside_kahler"] = exc.all_outside;
  ok = crep.crepant && sl && gen.equal && exc.all_outside;
  if (!with_global)
    return j;
  if (!crep.crepant || !sl) {
    j["global_moduli"] = nullptr;
    return j;
  }
  GlobalModuliFan g = build_global_fan(pair, q);
  Json gj;
  gj["rank"] = g.rank;
  gj["p_basis"] = rows_json(g.P);
  gj["q_basis"] = rows_json(g.Q);
  gj["q_user_supplied"] = g.q_user_supplied;
  gj["transition"] = rows_json(g.transition);
  gj["datasets_coincide"] = g.datasets_coincide;
  gj["C_X"] = cone_json(g.C_X, certs);
  gj["C_Z"] = cone_json(g.C_Z, certs);
  gj["intersection"] = cone_json(g.intersection, certs);
  gj["intersection_dim"] = cone_dimension(g.intersection);
  gj["kahler_X"] = cone_json(g.kahler_X, certs);
  gj["kahler_Z"] = cone_json(g.kahler_Z, certs);
  gj["face_in_C_X"] = g.face_in_C_X.is_face;
  gj["face_in_C_Z"] = g.face_in_C_Z.is_face;
  gj["kahler_X_in_intersection"] = g.kahler_X_in_intersection;
  gj["kahler_X_face_of_kahler_Z"] = g.kahler_X_face_of_kahler_Z.is_face;
  gj["single_cone"] = g.single_cone;
  if (certs) {
    gj["certificates"]["face_in_C_X"] = face_json(g.face_in_C_X);
    gj["certificates"]["face_in_C_Z"] = face_json(g.face_in_C_Z);
    gj["certificates"]["kahler_X_face_of_kahler_Z"] = face_json(g.kahler_X_face_of_kahler_Z);
  }
  ok = ok && g.datasets_coincide && g.kahler_X_in_intersection && g.kahler_X_face_of_kahler_Z.is_face;
  j["global_moduli"] = gj;
  return j;
}

// --- the invariant suite --------------------------------------------------

struct Check {
  std::string name;
  std::string status; // pass, fail, skip
  Json detail;
};

Json checks_json(const std::vector<Check> &checks) {
  Json out = Json::array();
  for (const Check &c : checks) {
    Json j{{"name", c.name}, {"status", c.status}};
    if (!c.detail.is_null())
      j["detail"] = c.detail;
    out.push_back(j);
  }
  return out;
}

/// Runs `body`; an Error inside becomes a failed check carrying its message.
template <class F> Check guarded(const std::string &name, F &&body) {
  try {
    return body();
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::Resource)
      throw;
    return Check{name, "fail", Json{{"error", e.what()}}};
  }
}

Check pass_fail(const std::string &name, bool ok, Json detail = nullptr) {
  return Check{name, ok ? "pass" : "fail", std::move(detail)};
}

/// Portable draws in [lo, hi] from a fixed-seed engine.
long draw(std::mt19937_64 &rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Check box_bijection_check(Pipeline &p) {
  return guarded("box_bijection", [&] {
    MoriData mori = mori_lattices(p.pd());
    auto table = box_coset_map(mori);
    const ExtendedPicardData &pd = *p.pd();
    const auto &L = p.ext()->lattice_basis();
    std::mt19937_64 rng(0x5eed);
    std::size_t trials = 0, failures = 0;
    for (const BoxCosetEntry &b : table) {
      RatVec c = to_rat(b.pairings);
      if (mori.ceiling_map(c) != b.v)
        ++failures;
      for (int t = 0; t < 10; ++t) {
        IntVec l(p.ext()->n(), 0);
        for (const IntVec &basis : L) {
          long s = draw(rng, -3, 3);
          for (std::size_t i = 0; i < l.size(); ++i)
            l[i] += s * basis[i];
        }
        RatVec shifted = c;
        for (std::size_t a = 0; a < pd.k(); ++a)
          shifted[a] += Rat(dot(pd.lifts.row(a), l));
        ++trials;
        if (!mori.in_k(shifted) || mori.ceiling_map(shifted) != b.v)
          ++failures;
      }
    }
    return pass_fail("box_bijection", failures == 0,
                     Json{{"sectors", table.size()}, {"shifts", trials}, {"failures", failures}});
  });
}

std::vector<IntVec> random_relations(Pipeline &p, std::size_t count) {
  const auto &L = p.ext()->lattice_basis();
  std::mt19937_64 rng(0xfac7);
  std::vector<IntVec> out;
  while (out.size() < count) {
    IntVec l(p.ext()->n(), 0);
    for (const IntVec &basis : L) {
      long s = draw(rng, -2, 2);
      for (std::size_t i = 0; i < l.size(); ++i)
        l[i] += s * basis[i];
    }
    if (!is_zero(l))
      out.push_back(l);
  }
  return out;
}

std::vector<Check> run_suite(Pipeline &p, int order, Json &facts) {
  std::vector<Check> checks;
  const ExtendedStackyFan &ext = *p.ext();

  RhoMembership rm = rho_membership(p.pic());
  checks.push_back(pass_fail("rho_membership_agreement", rm.via_lp == rm.via_degree,
                             Json{{"via_lp", rm.via_lp}, {"via_degree", rm.via_degree}}));
  const bool rho_ok = rm.via_lp;
  facts["rho_in_extended_kahler"] = rho_ok;

  // The p basis (and everything after it) needs ρ ∈ Cone(p) ⊂ 𝒦^e.
  if (!rho_ok) {
    Json why{{"reason", "rho is not in the extended Kähler cone"}};
    for (const char *name : {"box_bijection", "rank_identity", "operator_factorization", "symbol_fiber_finite",
                             "symbol_fiber_sensitivity", "annihilation", "mirror_map_shape", "truncation_stability",
                             "unfolding_conditions"})
      checks.push_back(Check{name, "skip", why});
    return checks;
  }
  checks.push_back(box_bijection_check(p));

  const ExtendedPicardData &pd = *p.pd();
  ResidueAlgebra res = residue_algebra(pd, p.coh());
  checks.push_back(guarded("rank_identity", [&] {
    ResidueComparison cmp = compare_with_cohomology(res, p.coh());
    Int vol = normalized_volume(ext);
    bool ok = cmp.cohomology_dim && cmp.residue_dim && Int(*cmp.cohomology_dim) == vol &&
              *cmp.residue_dim == *cmp.cohomology_dim && cmp.well_defined && cmp.graded_dims_agree;
    return pass_fail("rank_identity", ok,
                     Json{{"cohomology_dim", dim_json(cmp.cohomology_dim)},
                          {"residue_dim", dim_json(cmp.residue_dim)},
                          {"normalized_volume", int_json(vol)},
                          {"well_defined", cmp.well_defined},
                          {"graded_dims_agree", cmp.graded_dims_agree}});
  }));

  checks.push_back(guarded("operator_factorization", [&] {
    std::vector<IntVec> rels = p.families().basis;
    for (const IntVec &l : random_relations(p, 20))
      rels.push_back(l);
    std::size_t bad = 0;
    for (const IntVec &l : rels) {
      LogDiffOp residual = box_tilde(pd, l) - factorization_prefactor(pd, l) * box_X(pd, l);
      if (!residual.is_zero())
        ++bad;
    }
    return pass_fail("operator_factorization", bad == 0, Json{{"relations", rels.size()}, {"nonzero_residuals", bad}});
  }));

  FamilySensitivity sens = symbol_fiber_sensitivity(pd, p.coh());
  checks.push_back(pass_fail("symbol_fiber_finite", sens.full.has_value(), Json{{"dim", dim_json(sens.full)}}));
  checks.push_back(pass_fail("symbol_fiber_sensitivity", sens.sensitive));

  checks.push_back(guarded("annihilation", [&] {
    const IContext &ctx = p.ctx();
    std::vector<LogDiffOp> ops{euler_check(pd)};
    for (const auto &[family, l] : labelled_relations(p.families()))
      ops.push_back(box_X(pd, l));
    int drop = 0;
    for (const LogDiffOp &op : ops)
      drop = std::max(drop, -order_shift(op));
    LogSeries tilde = tilde_I(ctx, i_function(ctx, order + drop));
    std::size_t residual = 0;
    int valid = order + drop;
    Json offending = Json::array();
    for (const LogDiffOp &op : ops) {
      AnnihilationReport rep = annihilation_check(ctx, op, tilde);
      residual += rep.residual_terms;
      valid = std::min(valid, rep.valid_order);
      for (const std::string &s : rep.offending)
        if (offending.size() < 10)
          offending.push_back(s);
    }
    Json d{{"operators", ops.size()}, {"valid_order", valid}, {"residual_terms", residual}};
    if (!offending.empty())
      d["offending"] = offending;
    return pass_fail("annihilation", residual == 0 && valid >= order, d);
  }));

  checks.push_back(guarded("mirror_map_shape", [&] {
    const IContext &ctx = p.ctx();
    MirrorMap mm = mirror_map(ctx, i_function(ctx, order));
    facts["mirror_map"] = mirror_map_json(ctx, mm);
    return pass_fail("mirror_map_shape", mm.shape_ok && mm.values_in_h2, Json{{"problems", mm.problems}});
  }));

  checks.push_back(guarded("truncation_stability", [&] {
    const IContext &ctx = p.ctx();
    MirrorMap a = mirror_map(ctx, i_function(ctx, order));
    MirrorMap b = mirror_map(ctx, i_function(ctx, order + 1));
    return pass_fail("truncation_stability", truncation_stable(a, b));
  }));

  checks.push_back(guarded("unfolding_conditions", [&] {
    UnfoldingReport u = check_unfolding_conditions(res);
    return pass_fail("unfolding_conditions", u.ic && u.gc && u.ec,
                     Json{{"ic", u.ic}, {"gc", u.gc}, {"ec", u.ec}, {"generated_dim", u.generated_dim}});
  }));
  return checks;
}

StackyFan parse_resolution(const std::optional<std::string> &text, const std::string &command) {
  if (!text)
    fail_validation(command + " needs a resolution fan (--resolution)");
  return parse_fan_text(*text).fan;
}

} // namespace

std::string error_kind_name(ErrorKind k) {
  switch (k) {
  case ErrorKind::Validation:
    return "validation";
  case ErrorKind::Invariant:
    return "invariant";
  case ErrorKind::Resource:
    return "resource";
  }
  return "unknown";
}

Json error_json(ErrorKind kind, const std::string &msg) {
  Json e;
  e["error"]["kind"] = error_kind_name(kind);
  e["error"]["exit_code"] = static_cast<int>(kind);
  e["error"]["message"] = msg;
  return e;
}

// --- parsing and serialization --------------------------------------------

FanDocument parse_fan(const Json &doc) {
  if (!doc.is_object())
    schema_error("", "expected an object");
  for (const auto &[key, value] : doc.items()) {
    static const std::set<std::string> known{"rank", "rays", "max_cones", "extra_generators", "p_basis", "q_basis",
                                             "name", "description"};
    if (!known.count(key))
      schema_error("/" + key, "unknown field");
    (void)value;
  }
  for (const char *req : {"rank", "rays", "max_cones"})
    if (!doc.contains(req))
      schema_error(std::string("/") + req, "missing required field");
  Int rank_big = json_int(doc["rank"], "/rank");
  if (rank_big < 1 || rank_big > 64)
    schema_error("/rank", "rank must be between 1 and 64");
  const std::size_t rank = rank_big.get_ui();
  std::vector<IntVec> rays = json_int_rows(doc["rays"], "/rays", rank);
  const Json &cones = doc["max_cones"];
  if (!cones.is_array())
    schema_error("/max_cones", "expected an array of index lists");
  std::vector<IndexSet> max_cones;
  for (std::size_t c = 0; c < cones.size(); ++c) {
    const std::string ptr = "/max_cones/" + std::to_string(c);
    if (!cones[c].is_array())
      schema_error(ptr, "expected an array of ray indices");
    IndexSet s;
    for (std::size_t t = 0; t < cones[c].size(); ++t) {
      Int idx = json_int(cones[c][t], ptr + "/" + std::to_string(t));
      if (idx < 1 || idx > static_cast<long>(rays.size()))
        schema_error(ptr + "/" + std::to_string(t),
                     "ray index " + idx.get_str() + " out of range 1.." + std::to_string(rays.size()));
      s.push_back(idx.get_ui() - 1);
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      schema_error(ptr, "repeated ray index");
    max_cones.push_back(std::move(s));
  }
  FanDocument out;
  out.fan = StackyFan(rank, std::move(rays), std::move(max_cones));
  if (doc.contains("extra_generators"))
    out.extra_generators = json_int_rows(doc["extra_generators"], "/extra_generators", rank);
  if (doc.contains("p_basis"))
    out.p_basis = json_int_rows(doc["p_basis"], "/p_basis", std::nullopt);
  if (doc.contains("q_basis"))
    out.q_basis = json_int_rows(doc["q_basis"], "/q_basis", std::nullopt);
  return out;
}

FanDocument parse_fan_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    fail_validation(std::string("malformed JSON: ") + e.what());
  }
  return parse_fan(doc);
}

Json to_json(const FanDocument &doc) {
  Json j;
  j["rank"] = doc.fan.rank();
  j["rays"] = rows_json(doc.fan.rays());
  Json cones = Json::array();
  for (const IndexSet &s : doc.fan.max_cones())
    cones.push_back(index_set_json(s));
  j["max_cones"] = cones;
  if (doc.extra_generators)
    j["extra_generators"] = rows_json(*doc.extra_generators);
  if (doc.p_basis)
    j["p_basis"] = rows_json(*doc.p_basis);
  if (doc.q_basis)
    j["q_basis"] = rows_json(*doc.q_basis);
  return j;
}

std::shared_ptr<const ExtendedStackyFan> extended_fan(const FanDocument &doc) {
  require_valid(doc.fan);
  if (doc.extra_generators)
    return std::make_shared<const ExtendedStackyFan>(doc.fan, *doc.extra_generators);
  return std::make_shared<const ExtendedStackyFan>(doc.fan);
}

void apply_basis_overrides(FanDocument &doc, const Json &overrides) {
  if (!overrides.is_object())
    schema_error("", "basis file must be an object");
  for (const auto &[key, value] : overrides.items()) {
    if (key == "p_basis")
      doc.p_basis = json_int_rows(value, "/p_basis", std::nullopt);
    else if (key == "q_basis")
      doc.q_basis = json_int_rows(value, "/q_basis", std::nullopt);
    else
      schema_error("/" + key, "unknown field");
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_string(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

Json rat_json(const Rat &q) { return rat_str(q); }

Json rat_vec_json(const RatVec &v) {
  Json a = Json::array();
  for (const Rat &q : v)
    a.push_back(rat_str(q));
  return a;
}

Json int_json(const Int &x) {
  if (x.fits_slong_p())
    return Json(x.get_si());
  return Json(x.get_str());
}

Json int_vec_json(const IntVec &v) {
  Json a = Json::array();
  for (const Int &x : v)
    a.push_back(int_json(x));
  return a;
}

Json index_set_json(const IndexSet &s) {
  Json a = Json::array();
  for (std::size_t i : s)
    a.push_back(i + 1);
  return a;
}

Json operator_json(const LogDiffOp &op) {
  const std::size_t k = op.k();
  Json terms = Json::array();
  for (const auto &[key, c] : op.terms()) {
    std::vector<int> chi(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<int> der(key.begin() + static_cast<std::ptrdiff_t>(k + 1),
                         key.begin() + static_cast<std::ptrdiff_t>(2 * k + 1));
    terms.push_back({{"coefficient", rat_str(c)},
                     {"chi", chi},
                     {"z", op.z_exp(key)},
                     {"derivations", der},
                     {"euler", op.euler_exp(key)}});
  }
  return Json{{"r", op.r()}, {"e", op.e()}, {"text", op.to_string()}, {"terms", terms}};
}

Json series_json(const LogSeries &s, const GradedQuotientRing &ring) {
  Json terms = Json::array();
  for (const auto &[key, c] : s.terms) {
    if (is_zero(c))
      continue;
    terms.push_back({{"chi", key.beta},
                     {"log_chi", key.logchi},
                     {"z", rat_str(key.zpow)},
                     {"log_z", key.logz},
                     {"class", class_string(ring, c)},
                     {"coords", rat_vec_json(c)}});
  }
  return Json{{"order", s.order}, {"terms", terms}};
}

const std::vector<std::string> &commands() {
  static const std::vector<std::string> cmds{"validate", "box",        "cohomology", "picard",
                                             "gkz",      "ifunction",  "mirror-map", "crepant",
                                             "global-moduli", "superpotential", "all"};
  return cmds;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

Outcome run(const Options &opts) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  std::string digest_input = opts.fan_text;
  if (opts.resolution_text)
    digest_input += '\0' + *opts.resolution_text;
  if (opts.basis_text)
    digest_input += '\0' + *opts.basis_text;
  try {
    if (std::find(commands().begin(), commands().end(), opts.command) == commands().end())
      fail_validation("unknown command '" + opts.command + "'");
    if (opts.order < 0 || opts.order > 40)
      fail_validation("--order must be between 0 and 40");
    FanDocument doc = parse_fan_text(opts.fan_text);
    if (opts.basis_text) {
      Json overrides;
      try {
        overrides = Json::parse(*opts.basis_text);
      } catch (const nlohmann::json::parse_error &e) {
        fail_validation(std::string("malformed basis file: ") + e.what());
      }
      apply_basis_overrides(doc, overrides);
    }
    Json report;
    report["command"] = opts.command;
    report["version"] = kVersion;
    report["input_digest"] = digest_string(digest_input);
    bool ok = true;
    std::string failure;
    Pipeline p(doc);
    const std::string &c = opts.command;
    if (c == "validate") {
      report["results"] = cmd_validate(doc, ok);
      if (!ok)
        failure = "fan failed validation";
    } else if (c == "box") {
      report["results"] = cmd_box(p);
    } else if (c == "cohomology") {
      report["results"] = cmd_cohomology(p, opts.emit_certificates);
    } else if (c == "picard") {
      report["results"] = cmd_picard(p, opts.emit_certificates);
    } else if (c == "gkz") {
      report["results"] = cmd_gkz(p);
    } else if (c == "ifunction") {
      report["results"] = cmd_ifunction(p, opts.order);
    } else if (c == "mirror-map") {
      MirrorMap mm = mirror_map(p.ctx(), i_function(p.ctx(), opts.order));
      report["results"] = mirror_map_json(p.ctx(), mm);
      ok = mm.shape_ok && mm.values_in_h2;
      if (!ok)
        failure = "mirror map has the wrong shape";
    } else if (c == "superpotential") {
      report["results"] = cmd_superpotential(p);
    } else if (c == "crepant" || c == "global-moduli") {
      ResolutionPair pair = make_resolution_pair(doc.fan, parse_resolution(opts.resolution_text, c));
      if (c == "crepant") {
        report["results"] = resolution_report(pair, doc.q_basis, opts.emit_certificates, true, ok);
        if (!ok)
          failure = "resolution checks failed";
      } else {
        GlobalModuliFan g = build_global_fan(pair, doc.q_basis);
        bool unused = true;
        Json full = resolution_report(pair, doc.q_basis, opts.emit_certificates, true, unused);
        report["results"] = full["global_moduli"];
        ok = g.datasets_coincide && g.kahler_X_in_intersection && g.kahler_X_face_of_kahler_Z.is_face;
        if (!ok)
          failure = "global moduli fan checks failed";
      }
    } else if (c == "all") {
      bool valid = true;
      Json v = cmd_validate(doc, valid);
      if (!valid)
        fail_validation("fan failed validation: " + v["failures"].dump());
      Json facts;
      std::vector<Check> checks = run_suite(p, opts.order, facts);
      if (opts.resolution_text) {
        ResolutionPair pair = make_resolution_pair(doc.fan, parse_resolution(opts.resolution_text, c));
        checks.push_back(guarded("crepant_suite", [&] {
          bool rok = true;
          Json rj = resolution_report(pair, doc.q_basis, false, true, rok);
          return pass_fail("crepant_suite", rok, rj);
        }));
      }
      std::size_t passed = 0, failed = 0, skipped = 0;
      for (const Check &ch : checks)
        (ch.status == "pass" ? passed : ch.status == "fail" ? failed : skipped)++;
      report["results"]["checks"] = checks_json(checks);
      report["results"]["facts"] = facts;
      report["results"]["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
      ok = failed == 0;
      if (!ok)
        failure = std::to_string(failed) + " invariant check(s) failed";
    }
    if (opts.timing) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      report["timing_ms"] = ms.count();
    }
    report["status"] = ok ? "ok" : "fail";
    out.report = report;
    if (!ok) {
      ErrorKind kind = c == "validate" ? ErrorKind::Validation : ErrorKind::Invariant;
      out.exit_code = static_cast<int>(kind);
      out.error = error_json(kind, failure);
    }
  } catch (const Error &e) {
    out.exit_code = static_cast<int>(e.kind());
    out.error = error_json(e.kind(), e.what());
  } catch (const std::bad_alloc &) {
    out.exit_code = static_cast<int>(ErrorKind::Resource);
    out.error = error_json(ErrorKind::Resource, "out of memory");
  } catch (const std::exception &e) {
    out.exit_code = static_cast<int>(ErrorKind::Invariant);
    out.error = error_json(ErrorKind::Invariant, std::string("internal error: ") + e.what());
  }
  return out;
}

} // namespace tlg::io
