#include "tlg/fan.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tlg {

namespace {

std::string set_str(const IndexSet &s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

std::string vec_str(const IntVec &v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + v[i].get_str();
  return out + ")";
}

bool subset_of(const IndexSet &a, const IndexSet &b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

} // namespace

StackyFan::StackyFan(std::size_t rank, std::vector<IntVec> rays, std::vector<IndexSet> max_cones)
    : rank_(rank), rays_(std::move(rays)), cones_(std::move(max_cones)) {
  for (const IntVec &a : rays_)
    if (a.size() != rank_)
      fail_validation("ray " + vec_str(a) + " does not have length " + std::to_string(rank_));
  for (IndexSet &c : cones_) {
    std::sort(c.begin(), c.end());
    for (std::size_t i : c)
      if (i >= rays_.size())
        fail_validation("maximal cone refers to ray index " + std::to_string(i + 1) + " out of range");
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      fail_validation("maximal cone " + set_str(c) + " repeats a ray");
  }
  for (std::size_t k = 0; k < cones_.size(); ++k) {
    if (cones_[k].size() != rank_) {
      inverses_.emplace_back();
      continue;
    }
    auto inv = inverse(to_rat(cone_matrix(k)));
    inverses_.push_back(inv ? *inv : RatMatrix());
  }
}

IntMatrix StackyFan::cone_matrix(std::size_t k) const {
  std::vector<IntVec> cols;
  for (std::size_t i : cones_[k])
    cols.push_back(rays_[i]);
  return IntMatrix::from_cols(cols, rank_);
}

Int StackyFan::cone_determinant(std::size_t k) const { return abs(determinant(cone_matrix(k))); }

bool StackyFan::is_cone(const IndexSet &rays) const {
  if (rays.empty())
    return true;
  for (const IndexSet &c : cones_)
    if (subset_of(rays, c))
      return true;
  return false;
}

RatVec StackyFan::coordinates_in(std::size_t k, const RatVec &x) const {
  if (inverses_[k].rows() == 0)
    fail_validation("maximal cone " + set_str(cones_[k]) + " is not simplicial");
  return inverses_[k] * x;
}

ValidationReport validate(const StackyFan &fan) {
  ValidationReport rep;
  const std::size_t d = fan.rank();
  for (std::size_t i = 0; i < fan.num_rays(); ++i)
    if (!is_primitive(fan.rays()[i])) {
      rep.primitive = false;
      rep.failures.push_back("ray " + std::to_string(i + 1) + " " + vec_str(fan.rays()[i]) + " is not primitive");
    }
  if (fan.max_cones().empty()) {
    rep.complete = false;
    rep.failures.push_back("fan has no maximal cones");
  }
  for (std::size_t k = 0; k < fan.max_cones().size(); ++k) {
    const IndexSet &c = fan.max_cones()[k];
    if (c.size() != d || fan.cone_determinant(k) == 0) {
      rep.simplicial = false;
      rep.failures.push_back("maximal cone " + set_str(c) + " is not simplicial of dimension " + std::to_string(d));
    }
  }
  if (!rep.simplicial)
    return rep;

  // Wall pairing: every (d−1)-face of a maximal cone lies in exactly two maximal cones,
  // and those two lie on opposite sides of it.
  std::map<IndexSet, std::vector<std::size_t>> wall_owners;
  for (std::size_t k = 0; k < fan.max_cones().size(); ++k) {
    const IndexSet &c = fan.max_cones()[k];
    for (std::size_t drop = 0; drop < c.size(); ++drop) {
      IndexSet w;
      for (std::size_t j = 0; j < c.size(); ++j)
        if (j != drop)
          w.push_back(c[j]);
      wall_owners[w].push_back(k);
    }
  }
  std::vector<std::vector<std::size_t>> adj(fan.max_cones().size());
  for (const auto &[w, owners] : wall_owners) {
    if (owners.size() != 2) {
      rep.complete = false;
      rep.failures.push_back("wall " + set_str(w) + " lies in " + std::to_string(owners.size()) +
                             " maximal cone(s), expected 2");
      continue;
    }
    const IndexSet &ca = fan.max_cones()[owners[0]], &cb = fan.max_cones()[owners[1]];
    std::size_t ib = 0, pos = 0;
    for (std::size_t j = 0; j < ca.size(); ++j)
      if (!std::binary_search(w.begin(), w.end(), ca[j]))
        pos = j;
    for (std::size_t j : cb)
      if (!std::binary_search(w.begin(), w.end(), j))
        ib = j;
    RatVec c = fan.coordinates_in(owners[0], to_rat(fan.rays()[ib]));
    if (c[pos] >= 0) {
      rep.complete = false;
      rep.failures.push_back("maximal cones " + set_str(ca) + " and " + set_str(cb) + " lie on the same side of wall " +
                             set_str(w));
    }
    adj[owners[0]].push_back(owners[1]);
    adj[owners[1]].push_back(owners[0]);
  }
  if (!fan.max_cones().empty()) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t k = stack.back();
      stack.pop_back();
      for (std::size_t j : adj[k])
        if (!seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) {
        rep.complete = false;
        rep.failures.push_back("maximal cone " + set_str(fan.max_cones()[k]) + " is not connected to cone " +
                               set_str(fan.max_cones()[0]) + " through walls");
        break;
      }
  }
  return rep;
}

void require_valid(const StackyFan &fan) {
  ValidationReport rep = validate(fan);
  if (rep.ok())
    return;
  std::string msg = "invalid stacky fan:";
  for (const std::string &f : rep.failures)
    msg += " " + f + ";";
  msg.pop_back();
  fail_validation(msg);
}

ConeLocation locate(const StackyFan &fan, const IntVec &c) {
  RatVec x = to_rat(c);
  for (std::size_t k = 0; k < fan.max_cones().size(); ++k) {
    RatVec t = fan.coordinates_in(k, x);
    if (std::any_of(t.begin(), t.end(), [](const Rat &q) { return q < 0; }))
      continue;
    ConeLocation loc;
    loc.max_cone = k;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t[j] > 0) {
        loc.cone.push_back(fan.max_cones()[k][j]);
        loc.coords.push_back(t[j]);
      }
    return loc;
  }
  fail_validation("vector " + vec_str(c) + " lies in no maximal cone (fan not complete)");
}

IndexSet minimal_cone(const StackyFan &fan, const IntVec &c) { return locate(fan, c).cone; }

std::vector<BoxElement> box_elements(const StackyFan &fan) {
  const std::size_t d = fan.rank();
  std::set<IntVec> points;
  for (std::size_t k = 0; k < fan.max_cones().size(); ++k) {
    IntMatrix B = fan.cone_matrix(k);
    SNFDecomposition snf = smith_normal_form(B);
    IntMatrix Uinv = to_int(*inverse(to_rat(snf.U)));
    // ℤ^d / Bℤ^d ≅ ⊕ ℤ/s_i; representatives U^{-1} x with 0 <= x_i < s_i.
    IntVec bound(d);
    for (std::size_t i = 0; i < d; ++i)
      bound[i] = snf.S(i, i);
    IntVec x(d, 0);
    for (;;) {
      RatVec t = fan.coordinates_in(k, to_rat(Uinv * x));
      RatVec v(d);
      for (std::size_t j = 0; j < d; ++j) {
        Rat f = frac_rat(t[j]);
        for (std::size_t i = 0; i < d; ++i)
          v[i] += f * Rat(B(i, j));
      }
      points.insert(to_int(v));
      std::size_t i = 0;
      while (i < d) {
        x[i] += 1;
        if (x[i] < bound[i])
          break;
        x[i] = 0;
        ++i;
      }
      if (i == d)
        break;
    }
  }
  std::vector<BoxElement> out;
  for (const IntVec &v : points) {
    ConeLocation loc = locate(fan, v);
    Rat age = 0;
    for (const Rat &q : loc.coords)
      age += q;
    out.push_back({v, loc.cone, loc.coords, age});
  }
  return out;
}

std::vector<BoxElement> gen_elements(const StackyFan &fan) {
  std::vector<BoxElement> box = box_elements(fan);
  std::vector<BoxElement> out;
  for (const BoxElement &g : box) {
    if (g.cone.empty())
      continue;
    bool reducible = false;
    for (const BoxElement &x : box) {
      if (x.cone.empty() || x.v == g.v || !subset_of(x.cone, g.cone))
        continue;
      bool dominated = true;
      for (std::size_t j = 0; j < x.cone.size() && dominated; ++j) {
        std::size_t pos = std::lower_bound(g.cone.begin(), g.cone.end(), x.cone[j]) - g.cone.begin();
        if (x.coords[j] > g.coords[pos])
          dominated = false;
      }
      if (dominated) {
        reducible = true;
        break;
      }
    }
    if (!reducible)
      out.push_back(g);
  }
  return out;
}

std::vector<Wall> walls(const StackyFan &fan) {
  std::vector<Wall> out;
  const auto &cones = fan.max_cones();
  for (std::size_t a = 0; a < cones.size(); ++a)
    for (std::size_t b = a + 1; b < cones.size(); ++b) {
      IndexSet common;
      std::set_intersection(cones[a].begin(), cones[a].end(), cones[b].begin(), cones[b].end(),
                            std::back_inserter(common));
      if (common.size() + 1 != fan.rank())
        continue;
      std::size_t ia = 0, ib = 0;
      for (std::size_t i : cones[a])
        if (!std::binary_search(common.begin(), common.end(), i))
          ia = i;
      for (std::size_t i : cones[b])
        if (!std::binary_search(common.begin(), common.end(), i))
          ib = i;
      RatVec c = fan.coordinates_in(a, to_rat(fan.rays()[ib]));
      RatVec rel(fan.num_rays());
      rel[ib] += 1;
      for (std::size_t j = 0; j < cones[a].size(); ++j)
        rel[cones[a][j]] -= c[j];
      out.push_back({a, b, ia, ib, rel});
    }
  return out;
}

bool anticanonical_nef(const StackyFan &fan) {
  for (const Wall &w : walls(fan)) {
    Rat s = 0;
    for (const Rat &q : w.relation)
      s += q;
    if (s < 0)
      return false;
  }
  return true;
}

ExtendedStackyFan::ExtendedStackyFan(StackyFan fan) : fan_(std::move(fan)) {
  require_valid(fan_);
  for (const BoxElement &g : gen_elements(fan_)) {
    extra_.push_back(g.v);
    extra_box_.push_back(g);
  }
  build();
}

ExtendedStackyFan::ExtendedStackyFan(StackyFan fan, std::vector<IntVec> extra) : fan_(std::move(fan)) {
  require_valid(fan_);
  std::vector<BoxElement> box = box_elements(fan_);
  std::set<IntVec> seen;
  for (std::size_t k = 0; k < extra.size(); ++k) {
    const IntVec &v = extra[k];
    if (v.size() != fan_.rank())
      fail_validation("extra generator " + std::to_string(k + 1) + " has wrong length");
    if (is_zero(v) || !is_primitive(v))
      fail_validation("extra generator " + vec_str(v) + " is not primitive");
    if (!seen.insert(v).second)
      fail_validation("extra generator " + vec_str(v) + " is repeated");
    auto it = std::find_if(box.begin(), box.end(), [&](const BoxElement &b) { return b.v == v; });
    if (it == box.end())
      fail_validation("extra generator " + vec_str(v) + " is not a Box element");
    extra_.push_back(v);
    extra_box_.push_back(*it);
  }
  build();
}

void ExtendedStackyFan::build() {
  A_ = IntMatrix::from_cols(generators(), rank());
  IntVec bad = cokernel_factors(A_);
  if (!bad.empty()) {
    std::string msg = "generator map is not surjective; cokernel invariant factors:";
    for (const Int &f : bad)
      msg += " " + f.get_str();
    fail_validation(msg);
  }
  split_ = splitting_maps(A_);
  L_ = split_.t.transpose().row_list();
}

std::vector<IntVec> ExtendedStackyFan::generators() const {
  std::vector<IntVec> g = fan_.rays();
  g.insert(g.end(), extra_.begin(), extra_.end());
  return g;
}

Rat ExtendedStackyFan::degree(std::size_t i) const { return i < m() ? Rat(1) : extra_box_[i - m()].age; }

bool ExtendedStackyFan::generator_in_cone(std::size_t i, std::size_t k) const {
  const IndexSet &c = fan_.max_cones()[k];
  if (i < m())
    return std::binary_search(c.begin(), c.end(), i);
  return subset_of(extra_box_[i - m()].cone, c);
}

bool ExtendedStackyFan::is_face_set(const IndexSet &idx) const {
  for (std::size_t k = 0; k < fan_.max_cones().size(); ++k) {
    bool all = true;
    for (std::size_t i : idx)
      if (!generator_in_cone(i, k)) {
        all = false;
        break;
      }
    if (all)
      return true;
  }
  return idx.empty();
}

IndexSet ExtendedStackyFan::cone_generators(std::size_t k) const {
  IndexSet out;
  for (std::size_t i = 0; i < n(); ++i)
    if (generator_in_cone(i, k))
      out.push_back(i);
  return out;
}

std::pair<std::vector<IndexSet>, std::vector<IndexSet>> anticones(const ExtendedStackyFan &ext) {
  const std::size_t m = ext.m();
  std::vector<IndexSet> A;
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    IndexSet I, comp;
    for (std::size_t i = 0; i < m; ++i)
      ((mask >> i) & 1 ? I : comp).push_back(i);
    if (ext.fan().is_cone(comp))
      A.push_back(I);
  }
  std::sort(A.begin(), A.end(), [](const IndexSet &a, const IndexSet &b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  std::vector<IndexSet> Ae;
  for (IndexSet I : A) {
    for (std::size_t k = m; k < ext.n(); ++k)
      I.push_back(k);
    Ae.push_back(I);
  }
  return {A, Ae};
}

bool in_extended_anticones(const ExtendedStackyFan &ext, const IndexSet &idx) {
  IndexSet comp;
  for (std::size_t k = ext.m(); k < ext.n(); ++k)
    if (!std::binary_search(idx.begin(), idx.end(), k))
      return false;
  for (std::size_t i = 0; i < ext.m(); ++i)
    if (!std::binary_search(idx.begin(), idx.end(), i))
      comp.push_back(i);
  return ext.fan().is_cone(comp);
}

std::vector<IndexSet> generalized_primitive_collections(const ExtendedStackyFan &ext) {
  const std::size_t n = ext.n();
  if (n > 24)
    fail_resource("generalized_primitive_collections: too many generators");
  std::vector<bool> face(std::size_t(1) << n, false);
  std::vector<IndexSet> out;
  std::vector<std::size_t> masks(face.size());
  for (std::size_t i = 0; i < masks.size(); ++i)
    masks[i] = i;
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::size_t a, std::size_t b) { return __builtin_popcountll(a) < __builtin_popcountll(b); });
  for (std::size_t mask : masks) {
    IndexSet I;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1)
        I.push_back(i);
    bool subsets_faces = true;
    for (std::size_t i : I)
      if (!face[mask & ~(std::size_t(1) << i)])
        subsets_faces = false;
    if (!subsets_faces)
      continue;
    if (ext.is_face_set(I))
      face[mask] = true;
    else
      out.push_back(I);
  }
  std::sort(out.begin(), out.end(),
            [](const IndexSet &a, const IndexSet &b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return out;
}

std::vector<IntVec> cone_relations(const ExtendedStackyFan &ext, std::size_t max_cone) {
  IndexSet J = ext.cone_generators(max_cone);
  std::vector<IntVec> cols;
  for (std::size_t i : J)
    cols.push_back(ext.generator(i));
  std::vector<IntVec> out;
  for (const IntVec &k : kernel_basis(IntMatrix::from_cols(cols, ext.rank()))) {
    IntVec full(ext.n(), 0);
    for (std::size_t j = 0; j < J.size(); ++j)
      full[J[j]] = k[j];
    out.push_back(full);
  }
  return out;
}

RatVec distinguished_relation(const ExtendedStackyFan &ext, std::size_t k) {
  RatVec l(ext.n());
  l[ext.m() + k] = 1;
  const BoxElement &b = ext.extra_box(k);
  for (std::size_t j = 0; j < b.cone.size(); ++j)
    l[b.cone[j]] -= b.coords[j];
  return l;
}

} // namespace tlg
