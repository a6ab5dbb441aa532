#include "tlg/cohomology.hpp"

#include <algorithm>
#include <set>

namespace tlg {

std::vector<Polynomial> OrbifoldCohomology::all_generators() const {
  std::vector<Polynomial> g = cone_binomials;
  g.insert(g.end(), euler_forms.begin(), euler_forms.end());
  g.insert(g.end(), gp_monomials.begin(), gp_monomials.end());
  return g;
}

namespace {

Polynomial binomial(const OrderPtr &ord, const IntVec &l, std::size_t offset) {
  Monomial pos(ord->nvars(), 0), neg(ord->nvars(), 0);
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] > 0)
      pos[offset + i] = static_cast<int>(l[i].get_si());
    else if (l[i] < 0)
      neg[offset + i] = static_cast<int>(-l[i].get_si());
  }
  return Polynomial::monomial(ord, pos) - Polynomial::monomial(ord, neg);
}

} // namespace

std::vector<Polynomial> lattice_ideal(const std::vector<IntVec> &relations, const std::vector<Rat> &degrees) {
  const std::size_t k = degrees.size();
  auto plain = std::make_shared<MonomialOrder>();
  plain->weights = integer_weights(degrees);
  if (relations.empty())
    return {};
  // Saturate in ℚ[t, x]: eliminate t from (binomials, 1 − t·x_1⋯x_k).
  auto elim = std::make_shared<MonomialOrder>();
  elim->weights.push_back(1);
  elim->weights.insert(elim->weights.end(), plain->weights.begin(), plain->weights.end());
  elim->elim = 1;
  std::vector<Polynomial> gens;
  for (const IntVec &l : relations)
    gens.push_back(binomial(elim, l, 1));
  Monomial tx(k + 1, 1);
  gens.push_back(Polynomial::constant(elim, 1) - Polynomial::monomial(elim, tx));
  std::vector<Polynomial> out;
  for (const Polynomial &g : groebner_basis(gens)) {
    if (g.lead_monomial()[0] != 0)
      continue;
    std::vector<Polynomial::Term> terms;
    for (const auto &[m, c] : g.terms())
      terms.push_back({Monomial(m.begin() + 1, m.end()), c});
    out.emplace_back(plain, std::move(terms));
  }
  return out;
}

OrbifoldCohomology presentation(const ExtendedStackyFan &ext) {
  const std::size_t n = ext.n();
  std::vector<std::string> names;
  std::vector<Rat> degrees;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("D" + std::to_string(i + 1));
    degrees.push_back(ext.degree(i));
  }
  auto ord = std::make_shared<MonomialOrder>();
  ord->weights = integer_weights(degrees);

  OrbifoldCohomology H;
  std::set<IntVec> seen;
  for (std::size_t k = 0; k < ext.fan().max_cones().size(); ++k) {
    IndexSet J = ext.cone_generators(k);
    std::vector<IntVec> local;
    for (const IntVec &l : cone_relations(ext, k)) {
      IntVec sub;
      for (std::size_t i : J)
        sub.push_back(l[i]);
      local.push_back(sub);
    }
    std::vector<Rat> jdeg;
    for (std::size_t i : J)
      jdeg.push_back(degrees[i]);
    for (const Polynomial &b : lattice_ideal(local, jdeg)) {
      // Back to a relation vector on all n generators.
      IntVec rel(n, 0);
      for (const auto &[m, c] : b.terms())
        for (std::size_t j = 0; j < J.size(); ++j)
          rel[J[j]] += c > 0 ? m[j] : -m[j];
      if (b.terms().size() != 2 || !seen.insert(rel).second)
        continue;
      H.cone_binomial_relations.push_back(rel);
      H.cone_binomials.push_back(binomial(ord, rel, 0));
    }
  }
  for (std::size_t row = 0; row < ext.rank(); ++row) {
    Polynomial E(ord);
    for (std::size_t i = 0; i < ext.m(); ++i)
      E = E + Polynomial::variable(ord, i).scaled(Rat(ext.A()(row, i)));
    H.euler_forms.push_back(E);
  }
  for (const IndexSet &I : generalized_primitive_collections(ext)) {
    Monomial m(n, 0);
    for (std::size_t i : I)
      m[i] = 1;
    H.gp_monomials.push_back(Polynomial::monomial(ord, m));
  }
  H.ring = std::make_shared<GradedQuotientRing>(names, degrees, H.all_generators());
  return H;
}

Int normalized_volume(const ExtendedStackyFan &ext) {
  if (!anticanonical_nef(ext.fan()))
    fail_validation("normalized_volume: anticanonical PL function is not convex (non-nef input)");
  for (std::size_t k = 0; k < ext.e(); ++k)
    if (ext.extra_box(k).age > 1)
      fail_validation("normalized_volume: extended generator " + std::to_string(ext.m() + k + 1) +
                      " has age > 1 and lies outside {phi <= 1}");
  Int vol = 0;
  for (std::size_t k = 0; k < ext.fan().max_cones().size(); ++k)
    vol += ext.fan().cone_determinant(k);
  return vol;
}

RatVec first_chern_class(const ExtendedStackyFan &ext, const GradedQuotientRing &ring) {
  Polynomial c(ring.order());
  for (std::size_t i = 0; i < ext.m(); ++i)
    c = c + ring.variable(i);
  return ring.to_class(c);
}

RatMatrix grading_matrix(const GradedQuotientRing &ring) {
  const auto &deg = ring.basis_degrees();
  RatMatrix M(deg.size(), deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i)
    M(i, i) = deg[i];
  return M;
}

RatMatrix residue_a0(const ExtendedStackyFan &ext, const GradedQuotientRing &ring) {
  RatVec c1 = first_chern_class(ext, ring);
  for (Rat &q : c1)
    q = -q;
  return ring.multiplication_matrix(c1);
}

Rat top_pairing(const GradedQuotientRing &ring, const RatVec &x, const RatVec &y) {
  const auto &deg = ring.basis_degrees();
  if (deg.empty())
    fail_invariant("top_pairing: zero ring");
  Rat top = *std::max_element(deg.begin(), deg.end());
  std::size_t count = 0, idx = 0;
  for (std::size_t i = 0; i < deg.size(); ++i)
    if (deg[i] == top) {
      ++count;
      idx = i;
    }
  if (count != 1)
    fail_invariant("top_pairing: top degree is not one-dimensional");
  return ring.multiply(x, y)[idx];
}

} // namespace tlg
