#include "tlg/picard.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tlg {

RatVec PicardLattices::relation_coordinates(const RatVec &relation) const {
  return to_rat(ext->splitting().s) * relation;
}

IntVec PicardLattices::lift(const IntVec &u) const {
  // u·s is a functional whose restriction to 𝕃 is u, since s·T = id.
  return ext->splitting().s.transpose() * u;
}

IntVec PicardLattices::restrict_to_lattice(const IntVec &x) const { return ext->T().transpose() * x; }

std::vector<IntVec> pl_lattice(const ExtendedStackyFan &ext) {
  const std::size_t n = ext.n();
  if (ext.e() == 0)
    return kernel_basis(IntMatrix(0, n));
  std::vector<IntVec> rows;
  for (std::size_t k = 0; k < ext.e(); ++k)
    rows.push_back(primitive_integer_multiple(distinguished_relation(ext, k)));
  return kernel_basis(IntMatrix::from_rows(rows, n));
}

PicardLattices extended_pl_and_pic(std::shared_ptr<const ExtendedStackyFan> ext) {
  PicardLattices pic;
  pic.ext = ext;
  const std::size_t n = ext->n();
  pic.k = ext->lattice_basis().size();
  pic.pl_basis = pl_lattice(*ext);
  std::vector<IntVec> gens = pic.pl_basis;
  for (std::size_t k = 0; k < ext->e(); ++k) {
    IntVec d(n, 0);
    d[ext->m() + k] = 1;
    gens.push_back(d);
  }
  pic.pl_ext_basis = hermite_basis(gens, n);

  std::vector<IntVec> theta, ext_img;
  for (const IntVec &x : pic.pl_basis)
    theta.push_back(pic.restrict_to_lattice(x));
  for (const IntVec &x : pic.pl_ext_basis)
    ext_img.push_back(pic.restrict_to_lattice(x));
  pic.theta_pic_basis = hermite_basis(theta, pic.k);
  pic.pic_ext_basis = hermite_basis(ext_img, pic.k);
  if (pic.theta_pic_basis.size() != ext->r() || pic.pic_ext_basis.size() != pic.k)
    fail_invariant("extended Picard group has unexpected rank");

  pic.divisor_classes = ext->T().row_list();
  pic.rho = IntVec(pic.k, 0);
  pic.rho_bar = RatVec(pic.k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < pic.k; ++a) {
      pic.rho[a] += pic.divisor_classes[i][a];
      pic.rho_bar[a] += ext->degree(i) * pic.divisor_classes[i][a];
    }
  pic.kahler = kahler_cone(pic);
  return pic;
}

RationalCone kahler_cone(const PicardLattices &pic) {
  const ExtendedStackyFan &ext = *pic.ext;
  std::vector<RatVec> eq, ineq;
  for (std::size_t k = 0; k < ext.e(); ++k)
    eq.push_back(pic.relation_coordinates(distinguished_relation(ext, k)));
  std::set<IntVec> seen;
  for (const Wall &w : walls(ext.fan())) {
    RatVec rel(ext.n());
    for (std::size_t i = 0; i < ext.m(); ++i)
      rel[i] = w.relation[i];
    IntVec a = primitive_integer_multiple(pic.relation_coordinates(rel));
    if (seen.insert(a).second)
      ineq.push_back(to_rat(a));
  }
  RationalCone K = RationalCone::from_inequalities(pic.k, ineq, eq);
  for (const IntVec &ray : extreme_rays(K))
    K.generators.push_back(to_rat(ray));
  if (cone_dimension(K) != ext.r())
    fail_validation("Kähler cone has empty interior (input is not projective)");
  return K;
}

RationalCone extended_kahler_cone(const PicardLattices &pic) {
  std::vector<RatVec> gens = cone_generators(pic.kahler);
  for (std::size_t k = 0; k < pic.ext->e(); ++k)
    gens.push_back(to_rat(pic.divisor_classes[pic.ext->m() + k]));
  return RationalCone::from_generators(pic.k, gens);
}

RhoMembership rho_membership(const PicardLattices &pic) {
  const ExtendedStackyFan &ext = *pic.ext;
  RhoMembership out;

  // ρ = y + Σ μ_k [D_{m+k}] with y ∈ 𝒦 (H-description) and μ >= 0.
  const std::size_t k = pic.k, e = ext.e();
  LinearProgram lp(k + e);
  for (std::size_t a = 0; a < k; ++a)
    lp.free_var[a] = true;
  for (std::size_t a = 0; a < k; ++a) {
    RatVec row(k + e);
    row[a] = 1;
    for (std::size_t j = 0; j < e; ++j)
      row[k + j] = pic.divisor_classes[ext.m() + j][a];
    lp.add(row, Relation::Equal, Rat(pic.rho[a]));
  }
  for (const RatVec &h : pic.kahler.equations) {
    RatVec row(k + e);
    std::copy(h.begin(), h.end(), row.begin());
    lp.add(row, Relation::Equal, 0);
  }
  for (const RatVec &h : pic.kahler.inequalities) {
    RatVec row(k + e);
    std::copy(h.begin(), h.end(), row.begin());
    lp.add(row, Relation::GreaterEq, 0);
  }
  out.via_lp = solve_lp(lp).feasible();

  out.nef = anticanonical_nef(ext.fan());
  out.ages_at_most_one = true;
  for (std::size_t j = 0; j < e; ++j)
    if (ext.extra_box(j).age > 1)
      out.ages_at_most_one = false;
  out.via_degree = out.nef && out.ages_at_most_one;
  return out;
}

RatVec ExtendedPicardData::pairings(const RatVec &relation) const { return to_rat(lifts) * relation; }

RatVec ExtendedPicardData::delta(const RatVec &c) const { return M * c; }

std::vector<RatVec> ExtendedPicardData::p_bar_coefficients() const {
  std::vector<RatVec> out;
  for (std::size_t a = 0; a < r(); ++a) {
    RatVec v(ext().n());
    for (std::size_t i = 0; i < ext().m(); ++i)
      v[i] = lifts(a, i);
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> check_basis_p(const PicardLattices &pic, const IntMatrix &P) {
  std::vector<std::string> problems;
  const ExtendedStackyFan &ext = *pic.ext;
  const std::size_t r = ext.r();
  if (P.rows() != pic.k || P.cols() != pic.k) {
    problems.push_back("basis must have " + std::to_string(pic.k) + " vectors of length " + std::to_string(pic.k));
    return problems;
  }
  if (hermite_basis(P.row_list(), pic.k) != pic.pic_ext_basis)
    problems.push_back("vectors do not form a basis of the extended Picard group");
  for (std::size_t a = 0; a < r; ++a)
    if (!cone_contains(pic.kahler, to_rat(P.row(a))))
      problems.push_back("p_" + std::to_string(a + 1) + " does not lie in the Kähler cone");
  for (std::size_t j = 0; j < ext.e(); ++j)
    if (P.row(r + j) != pic.divisor_classes[ext.m() + j])
      problems.push_back("p_" + std::to_string(r + j + 1) + " is not [D_" + std::to_string(ext.m() + j + 1) + "]");
  if (problems.empty()) {
    RationalCone cp = RationalCone::from_generators(pic.k, [&] {
      std::vector<RatVec> g;
      for (std::size_t a = 0; a < pic.k; ++a)
        g.push_back(to_rat(P.row(a)));
      return g;
    }());
    if (!cone_contains(cp, to_rat(pic.rho)))
      problems.push_back("rho does not lie in Cone(p)");
  }
  return problems;
}

namespace {

ExtendedPicardData finish(const PicardLattices &pic, const IntMatrix &P, bool user) {
  ExtendedPicardData pd;
  pd.lattices = pic;
  pd.P = P;
  pd.user_supplied = user;
  const std::size_t n = pic.ext->n(), k = pic.k;
  pd.lifts = P * pic.ext->splitting().s;
  RatMatrix Pinv = *inverse(to_rat(P));
  pd.M = to_rat(IntMatrix::from_rows(pic.divisor_classes, k)) * Pinv;
  pd.rho_in_p = Pinv.transpose() * to_rat(pic.rho);
  for (std::size_t j = 0; j < pic.ext->e(); ++j)
    for (std::size_t a = 0; a < k; ++a)
      if (pd.M(pic.ext->m() + j, a) != (a == pic.ext->r() + j ? 1 : 0))
        fail_invariant("matrix M: extended row is not a unit vector");
  (void)n;
  return pd;
}

} // namespace

ExtendedPicardData choose_basis_p(const PicardLattices &pic, const std::optional<std::vector<IntVec>> &override_lifts) {
  const ExtendedStackyFan &ext = *pic.ext;
  const std::size_t r = ext.r(), k = pic.k;
  if (override_lifts) {
    std::vector<IntVec> rows;
    for (const IntVec &x : *override_lifts) {
      if (x.size() != ext.n())
        fail_validation("p_basis vectors must have length n = " + std::to_string(ext.n()));
      rows.push_back(pic.restrict_to_lattice(x));
    }
    if (rows.size() != k)
      fail_validation("p_basis must contain " + std::to_string(k) + " vectors");
    IntMatrix P = IntMatrix::from_rows(rows, k);
    auto problems = check_basis_p(pic, P);
    if (!problems.empty()) {
      std::string msg = "supplied p_basis rejected:";
      for (const auto &p : problems)
        msg += " " + p + ";";
      msg.pop_back();
      fail_validation(msg);
    }
    return finish(pic, P, true);
  }

  // Lattice vectors of θ(Pic) inside 𝒦, by increasing coefficient size; then the
  // first r-subset (in that order) that is a ℤ-basis of θ(Pic) and puts ρ in Cone(p).
  const auto &B = pic.theta_pic_basis;
  for (int bound = 2; bound <= 6; bound += 2) {
    std::vector<std::pair<IntVec, IntVec>> cands; // (coefficients, vector)
    IntVec c(r, -bound);
    for (;;) {
      if (!is_zero(c) && vec_gcd(c) == 1) {
        IntVec x(k, 0);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t a = 0; a < k; ++a)
            x[a] += c[i] * B[i][a];
        if (cone_contains(pic.kahler, to_rat(x)))
          cands.push_back({c, x});
      }
      std::size_t i = 0;
      while (i < r && c[i] == bound)
        c[i++] = -bound;
      if (i == r)
        break;
      c[i] += 1;
    }
    std::stable_sort(cands.begin(), cands.end(), [](const auto &a, const auto &b) {
      Int na = 0, nb = 0;
      for (const Int &x : a.first)
        na += abs(x);
      for (const Int &x : b.first)
        nb += abs(x);
      return na != nb ? na < nb : a.second < b.second;
    });
    if (cands.size() > 64)
      cands.resize(64);
    std::vector<std::size_t> pick;
    std::optional<IntMatrix> found;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (found)
        return;
      if (pick.size() == r) {
        IntMatrix C(r, r);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            C(i, j) = cands[pick[i]].first[j];
        if (abs(determinant(C)) != 1)
          return;
        IntMatrix P(k, k);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t a = 0; a < k; ++a)
            P(i, a) = cands[pick[i]].second[a];
        for (std::size_t j = 0; j < ext.e(); ++j)
          for (std::size_t a = 0; a < k; ++a)
            P(r + j, a) = pic.divisor_classes[ext.m() + j][a];
        if (check_basis_p(pic, P).empty())
          found = P;
        return;
      }
      for (std::size_t i = start; i < cands.size(); ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
    if (found)
      return finish(pic, *found, false);
  }
  fail_validation("no basis p_1..p_r of the Picard lattice inside the Kähler cone with rho in Cone(p) was "
                  "found within the search bound; supply one with --basis-file");
}

std::vector<SuperpotentialTerm> superpotential(const ExtendedPicardData &pd) {
  std::vector<SuperpotentialTerm> W;
  for (std::size_t i = 0; i < pd.ext().n(); ++i)
    W.push_back({Rat(-1), pd.lifts.col(i), pd.ext().generator(i)});
  return W;
}

MoriData mori_lattices(std::shared_ptr<const ExtendedPicardData> pd) { return MoriData{std::move(pd)}; }

bool MoriData::in_ne(const RatVec &c) const {
  return std::all_of(c.begin(), c.end(), [](const Rat &q) { return is_integer(q); });
}

bool MoriData::in_k(const RatVec &c) const {
  RatVec d = pd->delta(c);
  IndexSet I;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (is_integer(d[i]))
      I.push_back(i);
  return in_extended_anticones(pd->ext(), I);
}

bool MoriData::in_k_eff(const RatVec &c) const {
  RatVec d = pd->delta(c);
  IndexSet I;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (is_integer(d[i]) && d[i] >= 0)
      I.push_back(i);
  return in_extended_anticones(pd->ext(), I);
}

IntVec MoriData::ceiling_map(const RatVec &c) const {
  RatVec d = pd->delta(c);
  IntVec v(pd->ext().rank(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    Int ce = ceil_rat(d[i]);
    const IntVec &a = pd->ext().generator(i);
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] += ce * a[j];
  }
  return v;
}

std::optional<IntVec> nonneg_decomposition(const ExtendedStackyFan &ext, const IndexSet &cone, const IntVec &target) {
  const std::size_t n = ext.n();
  if (is_zero(target))
    return IntVec(n, 0);
  // Generators in the cone and their degrees (linear on the cone).
  IndexSet J;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < ext.m()) {
      if (std::binary_search(cone.begin(), cone.end(), i))
        J.push_back(i);
    } else if (std::includes(cone.begin(), cone.end(), ext.extra_box(i - ext.m()).cone.begin(),
                             ext.extra_box(i - ext.m()).cone.end())) {
      J.push_back(i);
    }
  }
  ConeLocation loc = locate(ext.fan(), target);
  Rat total_deg = 0;
  for (const Rat &q : loc.coords)
    total_deg += q;
  std::optional<IntVec> best;
  Int best_sum = 0;
  IntVec cur(n, 0);
  IntVec rest = target;
  std::function<void(std::size_t, Rat)> rec = [&](std::size_t j, Rat deg_left) {
    if (j == J.size()) {
      if (deg_left != 0 || !is_zero(rest))
        return;
      Int s = 0;
      for (const Int &x : cur)
        s += x;
      if (!best || s < best_sum || (s == best_sum && cur < *best)) {
        best = cur;
        best_sum = s;
      }
      return;
    }
    std::size_t i = J[j];
    Rat dg = ext.degree(i);
    Int maxc = floor_rat(deg_left / dg);
    const IntVec &a = ext.generator(i);
    for (Int c = 0; c <= maxc; ++c) {
      cur[i] = c;
      rec(j + 1, deg_left - Rat(c) * dg);
      for (std::size_t t = 0; t < rest.size(); ++t)
        rest[t] -= a[t];
    }
    for (std::size_t t = 0; t < rest.size(); ++t)
      rest[t] += (maxc + 1) * a[t];
    cur[i] = 0;
  };
  rec(0, total_deg);
  return best;
}

std::vector<BoxCosetEntry> box_coset_map(const MoriData &mori) {
  const ExtendedPicardData &pd = *mori.pd;
  const ExtendedStackyFan &ext = pd.ext();
  std::vector<BoxCosetEntry> table;
  std::set<IntVec> images;
  for (const BoxElement &b : box_elements(ext.fan())) {
    auto dec = nonneg_decomposition(ext, b.cone, b.v);
    if (!dec)
      fail_invariant("box element has no decomposition over the generators of its cone");
    RatVec rel = to_rat(*dec);
    for (std::size_t j = 0; j < b.cone.size(); ++j)
      rel[b.cone[j]] -= b.coords[j];
    RatVec c = pd.pairings(rel);
    if (!mori.in_ne(c))
      fail_invariant("coset representative d_v does not pair integrally with the p basis");
    if (pd.delta(c) != rel)
      fail_invariant("coset representative: <D_i,d> through M disagrees with the relation");
    if (!mori.in_k(c))
      fail_invariant("coset representative d_v is not in K");
    IntVec back = mori.ceiling_map(c);
    if (back != b.v)
      fail_invariant("ceiling map does not send d_v back to v");
    if (!images.insert(back).second)
      fail_invariant("ceiling map is not injective on coset representatives");
    table.push_back({b.v, *dec, rel, to_int(c)});
  }
  return table;
}

} // namespace tlg
