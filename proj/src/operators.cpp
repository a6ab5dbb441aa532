#include "tlg/operators.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tlg {

// ---------------------------------------------------------------------------
// LogDiffOp

LogDiffOp LogDiffOp::constant(std::size_t r, std::size_t e, const Rat &c) {
  LogDiffOp op(r, e);
  op.add_term(op.zero_key(), c);
  return op;
}

LogDiffOp LogDiffOp::chi(std::size_t r, std::size_t e, std::size_t a, int power) {
  LogDiffOp op(r, e);
  Key key = op.zero_key();
  key[a] = power;
  op.add_term(key, 1);
  return op;
}

LogDiffOp LogDiffOp::z(std::size_t r, std::size_t e, int power) {
  LogDiffOp op(r, e);
  Key key = op.zero_key();
  key[op.k()] = power;
  op.add_term(key, 1);
  return op;
}

LogDiffOp LogDiffOp::theta(std::size_t r, std::size_t e, std::size_t a) {
  if (a >= r)
    throw std::invalid_argument("LogDiffOp::theta: index is not a log variable");
  LogDiffOp op(r, e);
  Key key = op.zero_key();
  key[op.k() + 1 + a] = 1;
  op.add_term(key, 1);
  return op;
}

LogDiffOp LogDiffOp::dchi(std::size_t r, std::size_t e, std::size_t b) {
  if (b < r || b >= r + e)
    throw std::invalid_argument("LogDiffOp::dchi: index is not an extended variable");
  LogDiffOp op(r, e);
  Key key = op.zero_key();
  key[op.k() + 1 + b] = 1;
  op.add_term(key, 1);
  return op;
}

LogDiffOp LogDiffOp::euler(std::size_t r, std::size_t e) {
  LogDiffOp op(r, e);
  Key key = op.zero_key();
  key[2 * op.k() + 1] = 1;
  op.add_term(key, 1);
  return op;
}

LogDiffOp LogDiffOp::log_derivation(std::size_t r, std::size_t e, std::size_t a) {
  if (a < r)
    return theta(r, e, a);
  LogDiffOp op(r, e);
  Key key = op.zero_key();
  key[a] = 1;
  key[op.k() + 1 + a] = 1;
  op.add_term(key, 1);
  return op;
}

int LogDiffOp::order(const Key &key) const {
  int o = 0;
  for (std::size_t a = 0; a < k(); ++a)
    o += der_exp(key, a);
  return o + euler_exp(key);
}

int LogDiffOp::order() const {
  int o = -1;
  for (const auto &[key, c] : terms_)
    o = std::max(o, order(key));
  return o;
}

void LogDiffOp::add_term(const Key &key, const Rat &c) {
  if (c == 0)
    return;
  auto [it, inserted] = terms_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0)
      terms_.erase(it);
  }
}

void LogDiffOp::check_shape(const LogDiffOp &o) const {
  if (r_ != o.r_ || e_ != o.e_)
    throw std::invalid_argument("LogDiffOp: operands live in different variable sets");
}

LogDiffOp LogDiffOp::operator+(const LogDiffOp &o) const {
  check_shape(o);
  LogDiffOp out = *this;
  for (const auto &[key, c] : o.terms_)
    out.add_term(key, c);
  return out;
}

LogDiffOp LogDiffOp::operator-(const LogDiffOp &o) const {
  check_shape(o);
  LogDiffOp out = *this;
  for (const auto &[key, c] : o.terms_)
    out.add_term(key, -c);
  return out;
}

LogDiffOp LogDiffOp::scaled(const Rat &c) const {
  LogDiffOp out(r_, e_);
  if (c == 0)
    return out;
  for (const auto &[key, v] : terms_)
    out.terms_.emplace(key, v * c);
  return out;
}

// θ_a χ^β = χ^β (θ_a + β_a z); θ_a commutes with z, the other θ's and the ∂''s.
LogDiffOp LogDiffOp::left_theta(std::size_t a) const {
  LogDiffOp out(r_, e_);
  for (const auto &[key, c] : terms_) {
    Key k1 = key;
    k1[k() + 1 + a] += 1;
    out.add_term(k1, c);
    if (key[a] != 0) {
      Key k2 = key;
      k2[k()] += 1;
      out.add_term(k2, c * key[a]);
    }
  }
  return out;
}

// ∂'_b χ^β = χ^β ∂'_b + β_b z χ^{β − e_b}.
LogDiffOp LogDiffOp::left_dchi(std::size_t b) const {
  LogDiffOp out(r_, e_);
  for (const auto &[key, c] : terms_) {
    Key k1 = key;
    k1[k() + 1 + b] += 1;
    out.add_term(k1, c);
    if (key[b] != 0) {
      Key k2 = key;
      k2[b] -= 1;
      k2[k()] += 1;
      out.add_term(k2, c * key[b]);
    }
  }
  return out;
}

// ad E is a derivation with E(z) = z², [E, θ_a] = zθ_a, [E, ∂'_b] = z∂'_b and E(χ) = 0.
LogDiffOp LogDiffOp::left_euler() const {
  LogDiffOp out(r_, e_);
  for (const auto &[key, c] : terms_) {
    Key k1 = key;
    k1[2 * k() + 1] += 1;
    out.add_term(k1, c);
    int weight = key[k()];
    for (std::size_t a = 0; a < k(); ++a)
      weight += key[k() + 1 + a];
    if (weight != 0) {
      Key k2 = key;
      k2[k()] += 1;
      out.add_term(k2, c * weight);
    }
  }
  return out;
}

LogDiffOp LogDiffOp::operator*(const LogDiffOp &o) const {
  check_shape(o);
  LogDiffOp out(r_, e_);
  for (const auto &[key, c] : terms_) {
    // Apply the derivation part right to left: E^u, then ∂'^t, then θ^s.
    LogDiffOp acc = o;
    for (int i = 0; i < euler_exp(key); ++i)
      acc = acc.left_euler();
    for (std::size_t a = k(); a-- > 0;)
      for (int i = 0; i < der_exp(key, a); ++i)
        acc = a < r_ ? acc.left_theta(a) : acc.left_dchi(a);
    // Functions commute with functions.
    for (const auto &[k2, c2] : acc.terms_) {
      Key sum = k2;
      for (std::size_t j = 0; j <= k(); ++j)
        sum[j] += key[j];
      out.add_term(sum, c * c2);
    }
  }
  return out;
}

LogDiffOp LogDiffOp::pow(unsigned n) const {
  LogDiffOp out = constant(r_, e_, 1);
  for (unsigned i = 0; i < n; ++i)
    out = out * *this;
  return out;
}

std::string LogDiffOp::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  // Highest order first for readability.
  std::vector<std::pair<Key, Rat>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [this](const auto &x, const auto &y) { return order(x.first) > order(y.first); });
  for (const auto &[key, c] : sorted) {
    std::ostringstream mono;
    auto put = [&mono](const std::string &name, int p) {
      if (p == 0)
        return;
      if (mono.tellp() > 0)
        mono << "*";
      mono << name;
      if (p != 1)
        mono << "^" << p;
    };
    for (std::size_t a = 0; a < k(); ++a)
      put("chi" + std::to_string(a + 1), key[a]);
    put("z", key[k()]);
    for (std::size_t a = 0; a < k(); ++a)
      put((a < r_ ? "th" : "d") + std::to_string(a + 1), key[k() + 1 + a]);
    put("E", key[2 * k() + 1]);
    Rat abs_c = c < 0 ? Rat(-c) : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    std::string m = mono.str();
    if (m.empty())
      os << abs_c.get_str();
    else if (abs_c == 1)
      os << m;
    else
      os << abs_c.get_str() << "*" << m;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// λ-side reference operators

LogDiffOp box_hat(const IntVec &l) {
  const std::size_t n = l.size();
  LogDiffOp neg = LogDiffOp::constant(0, n, 1), pos = LogDiffOp::constant(0, n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    long c = l[i].get_si();
    if (c < 0)
      neg = neg * LogDiffOp::dchi(0, n, i).pow(static_cast<unsigned>(-c));
    else if (c > 0)
      pos = pos * LogDiffOp::dchi(0, n, i).pow(static_cast<unsigned>(c));
  }
  return neg - pos;
}

std::vector<LogDiffOp> euler_hat_k(const ExtendedStackyFan &ext) {
  const std::size_t n = ext.n();
  std::vector<LogDiffOp> out;
  for (std::size_t row = 0; row < ext.rank(); ++row) {
    LogDiffOp op(0, n);
    for (std::size_t i = 0; i < n; ++i)
      op = op + LogDiffOp::log_derivation(0, n, i).scaled(Rat(ext.A()(row, i)));
    out.push_back(op);
  }
  return out;
}

LogDiffOp euler_hat(const ExtendedStackyFan &ext) {
  const std::size_t n = ext.n();
  LogDiffOp op = LogDiffOp::euler(0, n);
  for (std::size_t i = 0; i < n; ++i)
    op = op + LogDiffOp::log_derivation(0, n, i);
  return op;
}

// ---------------------------------------------------------------------------
// Pulled-back operators

namespace {

void require_relation(const ExtendedStackyFan &ext, const IntVec &l) {
  if (l.size() != ext.n())
    fail_validation("relation has length " + std::to_string(l.size()) + ", expected " + std::to_string(ext.n()));
  if (!is_zero(ext.A() * l))
    fail_validation("vector is not a relation among the generators (not in L)");
}

IntVec int_pairings(const ExtendedPicardData &pd, const IntVec &l) { return to_int(pd.pairings(to_rat(l))); }

/// Π_{ν=0}^{c-1} (D − νz).
LogDiffOp pochhammer(const LogDiffOp &D, long c) {
  LogDiffOp out = LogDiffOp::constant(D.r(), D.e(), 1);
  for (long nu = 0; nu < c; ++nu)
    out = out * (D - LogDiffOp::z(D.r(), D.e()).scaled(nu));
  return out;
}

} // namespace

LogDiffOp d_tilde(const ExtendedPicardData &pd, std::size_t i) {
  const std::size_t r = pd.r(), e = pd.ext().e();
  LogDiffOp op(r, e);
  for (std::size_t a = 0; a < r + e; ++a)
    if (pd.M(i, a) != 0)
      op = op + LogDiffOp::log_derivation(r, e, a).scaled(pd.M(i, a));
  return op;
}

LogDiffOp d_script(const ExtendedPicardData &pd, std::size_t i) {
  const std::size_t m = pd.ext().m();
  if (i < m)
    return d_tilde(pd, i);
  return LogDiffOp::dchi(pd.r(), pd.ext().e(), pd.r() + (i - m));
}

LogDiffOp box_tilde(const ExtendedPicardData &pd, const IntVec &l) {
  const ExtendedStackyFan &ext = pd.ext();
  require_relation(ext, l);
  const std::size_t r = pd.r(), e = ext.e(), k = r + e;
  IntVec p = int_pairings(pd, l);
  LogDiffOp first = LogDiffOp::constant(r, e, 1), second = LogDiffOp::constant(r, e, 1);
  for (std::size_t a = 0; a < k; ++a) {
    int pa = static_cast<int>(p[a].get_si());
    if (pa > 0)
      first = first * LogDiffOp::chi(r, e, a, pa);
    else if (pa < 0)
      second = second * LogDiffOp::chi(r, e, a, -pa);
  }
  // The factors are polynomials in commuting log derivations, so their order is irrelevant.
  for (std::size_t i = 0; i < ext.n(); ++i) {
    long li = l[i].get_si();
    if (li < 0)
      first = first * pochhammer(d_tilde(pd, i), -li);
    else if (li > 0)
      second = second * pochhammer(d_tilde(pd, i), li);
  }
  return first - second;
}

LogDiffOp factorization_prefactor(const ExtendedPicardData &pd, const IntVec &l) {
  const ExtendedStackyFan &ext = pd.ext();
  const std::size_t r = pd.r(), e = ext.e();
  LogDiffOp out = LogDiffOp::constant(r, e, 1);
  for (std::size_t j = 0; j < e; ++j) {
    long c = l[ext.m() + j].get_si();
    if (c != 0)
      out = out * LogDiffOp::chi(r, e, r + j, static_cast<int>(c < 0 ? -c : c));
  }
  return out;
}

LogDiffOp box_X(const ExtendedPicardData &pd, const IntVec &l) {
  const ExtendedStackyFan &ext = pd.ext();
  require_relation(ext, l);
  const std::size_t r = pd.r(), e = ext.e(), m = ext.m();
  IntVec p = int_pairings(pd, l);
  auto side = [&](int sign) {
    LogDiffOp op = LogDiffOp::constant(r, e, 1);
    for (std::size_t a = 0; a < r; ++a) {
      int pa = sign * static_cast<int>(p[a].get_si());
      if (pa > 0)
        op = op * LogDiffOp::chi(r, e, a, pa);
    }
    // z∂_{χ_b} does not commute with the ray factors; putting it first keeps
    // χ_b^c ∂'^c = Π(zχ_b∂_{χ_b} − νz) adjacent to the χ prefactor.
    for (std::size_t j = 0; j < e; ++j) {
      long c = -sign * l[m + j].get_si();
      if (c > 0)
        op = op * d_script(pd, m + j).pow(static_cast<unsigned>(c));
    }
    for (std::size_t i = 0; i < m; ++i) {
      long c = -sign * l[i].get_si();
      if (c > 0)
        op = op * pochhammer(d_script(pd, i), c);
    }
    return op;
  };
  LogDiffOp bx = side(1) - side(-1);
  LogDiffOp residual = box_tilde(pd, l) - factorization_prefactor(pd, l) * bx;
  if (!residual.is_zero())
    fail_invariant("factorization of the box operator failed; residual " + residual.to_string());
  return bx;
}

LogDiffOp euler_check(const ExtendedPicardData &pd) {
  const std::size_t r = pd.r(), e = pd.ext().e();
  LogDiffOp op = LogDiffOp::euler(r, e);
  for (std::size_t i = 0; i < pd.ext().n(); ++i)
    op = op + d_tilde(pd, i);
  return op;
}

LogDiffOp degenerate_limit(const ExtendedPicardData &pd, const LogDiffOp &op) {
  const std::size_t r = op.r(), e = op.e(), k = r + e;
  // E ≡ E − Ě = −Σ_i 𝒟̃_i modulo the Euler operator.
  LogDiffOp e_class = LogDiffOp::euler(r, e) - euler_check(pd);
  LogDiffOp substituted(r, e);
  for (const auto &[key, c] : op.terms()) {
    LogDiffOp::Key base = key;
    int u = base[2 * k + 1];
    base[2 * k + 1] = 0;
    LogDiffOp t(r, e);
    t.add_term(base, c);
    substituted = substituted + t * e_class.pow(static_cast<unsigned>(u));
  }
  LogDiffOp out(r, e);
  for (const auto &[key, c] : substituted.terms()) {
    bool keep = key[k] == 0;
    for (std::size_t a = 0; a < k && keep; ++a)
      keep = key[a] == 0;
    if (keep)
      out.add_term(key, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symbols

OrderPtr symbol_order(std::size_t k) {
  auto ord = std::make_shared<MonomialOrder>();
  ord->weights.assign(2 * k + 2, 1);
  return ord;
}

std::vector<std::string> symbol_names(std::size_t k) {
  std::vector<std::string> names{"z"};
  for (std::size_t a = 0; a < k; ++a)
    names.push_back("chi" + std::to_string(a + 1));
  for (std::size_t a = 0; a < k; ++a)
    names.push_back("xi" + std::to_string(a + 1));
  names.push_back("xiE");
  return names;
}

Polynomial symbol(const LogDiffOp &op) {
  const std::size_t k = op.k();
  static thread_local std::map<std::size_t, OrderPtr> cache;
  auto it = cache.find(k);
  if (it == cache.end())
    it = cache.emplace(k, symbol_order(k)).first;
  Polynomial out(it->second);
  const int top = op.order();
  for (const auto &[key, c] : op.terms()) {
    if (op.order(key) != top)
      continue;
    Monomial mono(2 * k + 2, 0);
    mono[0] = op.z_exp(key);
    for (std::size_t a = 0; a < k; ++a) {
      mono[1 + a] = op.chi_exp(key, a);
      mono[1 + k + a] = op.der_exp(key, a);
    }
    mono[2 * k + 1] = op.euler_exp(key);
    out = out + Polynomial::monomial(it->second, mono, c);
  }
  return out;
}

OrderPtr fiber_order(std::size_t k) {
  auto ord = std::make_shared<MonomialOrder>();
  ord->weights.assign(k, 1);
  return ord;
}

Polynomial fiber_symbol(const LogDiffOp &op) {
  const std::size_t k = op.k();
  OrderPtr ord = fiber_order(k);
  Polynomial out(ord);
  const Polynomial full = symbol(op);
  for (const auto &[mono, c] : full.terms()) {
    bool keep = mono[0] == 0 && mono[2 * k + 1] == 0;
    for (std::size_t a = 0; a < k && keep; ++a)
      keep = mono[1 + a] == 0;
    if (keep)
      out = out + Polynomial::monomial(ord, Monomial(mono.begin() + 1 + k, mono.begin() + 1 + 2 * k), c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relation families

IntVec primitive_relation(const ExtendedStackyFan &ext, const IndexSet &I) {
  const std::size_t n = ext.n();
  IntVec sum(ext.rank(), 0);
  for (std::size_t i : I)
    for (std::size_t j = 0; j < ext.rank(); ++j)
      sum[j] += ext.generator(i)[j];
  IndexSet sigma = minimal_cone(ext.fan(), sum);
  auto dec = nonneg_decomposition(ext, sigma, sum);
  if (!dec)
    fail_invariant("no nonnegative decomposition of a primitive sum over its minimal cone");
  IntVec l(n, 0);
  for (std::size_t i : I)
    l[i] += 1;
  for (std::size_t j = 0; j < n; ++j)
    l[j] -= (*dec)[j];
  return l;
}

RelationFamilies relation_families(const ExtendedPicardData &pd, const OrbifoldCohomology &coh) {
  const ExtendedStackyFan &ext = pd.ext();
  RelationFamilies fam;
  fam.basis = ext.lattice_basis();
  fam.cone = coh.cone_binomial_relations;
  fam.primitive_collections = generalized_primitive_collections(ext);
  for (const IndexSet &I : fam.primitive_collections)
    fam.primitive.push_back(primitive_relation(ext, I));
  return fam;
}

namespace {

IntVec negated(const IntVec &v) {
  IntVec w = v;
  for (Int &x : w)
    x = -x;
  return w;
}

/// Relations of the selected families; each relation (up to sign) is attributed to the
/// first of primitive, cone, basis containing it.
std::vector<IntVec> select_relations(const RelationFamilies &fam, unsigned families) {
  std::set<IntVec> seen;
  std::vector<IntVec> out;
  auto take = [&](const std::vector<IntVec> &list, unsigned bit) {
    for (const IntVec &l : list) {
      if (is_zero(l))
        continue;
      bool fresh = seen.insert(l).second;
      seen.insert(negated(l));
      if (fresh && (families & bit))
        out.push_back(l);
    }
  };
  take(fam.primitive, FamilyPrimitive);
  take(fam.cone, FamilyCone);
  take(fam.basis, FamilyBasis);
  return out;
}

/// 𝐃_i in ℚ[ξ]: Σ_{a<=r} m_{ia} ξ_a for rays, ξ_{r+j} for extended generators.
std::vector<Polynomial> limit_generators(const ExtendedPicardData &pd, const OrderPtr &ord) {
  const ExtendedStackyFan &ext = pd.ext();
  std::vector<Polynomial> D;
  for (std::size_t i = 0; i < ext.n(); ++i) {
    if (i >= ext.m()) {
      D.push_back(Polynomial::variable(ord, pd.r() + (i - ext.m())));
      continue;
    }
    Polynomial p(ord);
    for (std::size_t a = 0; a < pd.r(); ++a)
      if (pd.M(i, a) != 0)
        p = p + Polynomial::variable(ord, a).scaled(pd.M(i, a));
    D.push_back(p);
  }
  return D;
}

std::vector<Polynomial> euler_relations(const ExtendedPicardData &pd, const std::vector<Polynomial> &D,
                                        const OrderPtr &ord) {
  const ExtendedStackyFan &ext = pd.ext();
  std::vector<Polynomial> out;
  for (std::size_t row = 0; row < ext.rank(); ++row) {
    Polynomial p(ord);
    for (std::size_t i = 0; i < ext.m(); ++i)
      p = p + D[i].scaled(Rat(ext.A()(row, i)));
    if (!p.is_zero())
      out.push_back(p);
  }
  return out;
}

/// Commutative image of an operator free of z, χ and E.
Polynomial commutative_image(const LogDiffOp &op, const OrderPtr &ord) {
  const std::size_t k = op.k();
  Polynomial out(ord);
  for (const auto &[key, c] : op.terms()) {
    if (op.euler_exp(key) != 0 || op.z_exp(key) != 0)
      throw std::logic_error("commutative_image: operator still carries z or E");
    Monomial mono(k, 0);
    for (std::size_t a = 0; a < k; ++a)
      mono[a] = op.der_exp(key, a);
    out = out + Polynomial::monomial(ord, mono, c);
  }
  return out;
}

std::vector<Rat> xi_degrees(const ExtendedPicardData &pd) {
  std::vector<Rat> deg(pd.r(), Rat(1));
  for (std::size_t j = 0; j < pd.ext().e(); ++j)
    deg.push_back(pd.ext().degree(pd.ext().m() + j));
  return deg;
}

std::vector<std::string> xi_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < k; ++a)
    names.push_back("xi" + std::to_string(a + 1));
  return names;
}

Polynomial substitute(const Polynomial &f, const std::vector<Polynomial> &images, const OrderPtr &ord) {
  Polynomial out(ord);
  for (const auto &[mono, c] : f.terms()) {
    Polynomial t = Polynomial::constant(ord, c);
    for (std::size_t i = 0; i < mono.size(); ++i)
      if (mono[i] != 0)
        t = t * images[i].pow(static_cast<unsigned>(mono[i]));
    out = out + t;
  }
  return out;
}

} // namespace

ResidueAlgebra residue_algebra(const ExtendedPicardData &pd, const OrbifoldCohomology &coh, unsigned families) {
  const std::size_t k = pd.k();
  std::vector<Rat> deg = xi_degrees(pd);
  auto ord = std::make_shared<MonomialOrder>();
  ord->weights = integer_weights(deg);
  ResidueAlgebra res;
  res.D = limit_generators(pd, ord);
  for (const IntVec &l : select_relations(relation_families(pd, coh), families)) {
    Polynomial p = commutative_image(degenerate_limit(pd, box_X(pd, l)), ord);
    if (!p.is_zero())
      res.relations.push_back(p);
  }
  for (const Polynomial &p : euler_relations(pd, res.D, ord))
    res.relations.push_back(p);
  res.ring = std::make_shared<GradedQuotientRing>(xi_names(k), deg, res.relations);
  return res;
}

ResidueComparison compare_with_cohomology(const ResidueAlgebra &res, const OrbifoldCohomology &coh) {
  ResidueComparison cmp;
  if (res.ring->finite())
    cmp.residue_dim = res.ring->dim();
  if (coh.ring->finite())
    cmp.cohomology_dim = coh.ring->dim();
  cmp.well_defined = true;
  for (const Polynomial &g : coh.all_generators()) {
    Polynomial image = substitute(g, res.D, res.ring->order());
    if (!res.ring->normal_form(image).is_zero()) {
      cmp.well_defined = false;
      break;
    }
  }
  if (cmp.residue_dim && cmp.cohomology_dim)
    cmp.graded_dims_agree = res.ring->graded_dims() == coh.ring->graded_dims();
  // A well-defined map onto ℚ[ξ]/I (the 𝐃_i generate) between spaces of equal
  // finite dimension is an isomorphism.
  cmp.isomorphic = cmp.well_defined && cmp.residue_dim && cmp.cohomology_dim && *cmp.residue_dim == *cmp.cohomology_dim;
  return cmp;
}

std::optional<std::size_t> symbol_fiber_dimension(const ExtendedPicardData &pd, const OrbifoldCohomology &coh,
                                                  unsigned families) {
  const std::size_t k = pd.k();
  OrderPtr ord = fiber_order(k);
  std::vector<Polynomial> gens;
  for (const IntVec &l : select_relations(relation_families(pd, coh), families)) {
    Polynomial s = fiber_symbol(box_X(pd, l));
    if (!s.is_zero())
      gens.push_back(s);
  }
  // Euler symbols; they vanish identically but are kept for completeness.
  std::vector<Polynomial> D;
  for (const Polynomial &p : limit_generators(pd, ord))
    D.push_back(p);
  for (const Polynomial &p : euler_relations(pd, D, ord))
    gens.push_back(p);
  GradedQuotientRing ring(xi_names(k), std::vector<Rat>(k, Rat(1)), gens);
  if (!ring.finite())
    return std::nullopt;
  return ring.dim();
}

FamilySensitivity symbol_fiber_sensitivity(const ExtendedPicardData &pd, const OrbifoldCohomology &coh) {
  FamilySensitivity out;
  out.full = symbol_fiber_dimension(pd, coh, FamilyAll);
  for (FamilyMask f : {FamilyBasis, FamilyCone, FamilyPrimitive}) {
    auto d = symbol_fiber_dimension(pd, coh, FamilyAll & ~static_cast<unsigned>(f));
    out.without.emplace_back(f, d);
    if (out.full && (!d || *d > *out.full))
      out.sensitive = true;
  }
  return out;
}

UnfoldingReport check_unfolding_conditions(const ResidueAlgebra &res) {
  const GradedQuotientRing &ring = *res.ring;
  UnfoldingReport rep;
  rep.dim = ring.dim();
  const std::size_t k = ring.nvars();
  std::vector<RatVec> gens;
  for (std::size_t a = 0; a < k; ++a)
    gens.push_back(ring.variable_class(a));
  rep.ic = k == 0 || rank(RatMatrix::from_rows(gens, rep.dim)) == k;

  // Krylov closure of 1 under the ξ's.
  std::vector<RatVec> span{ring.one_class()};
  std::size_t current = rank(RatMatrix::from_rows(span, rep.dim));
  std::vector<RatVec> frontier = span;
  while (!frontier.empty()) {
    std::vector<RatVec> next;
    for (const RatVec &v : frontier)
      for (const RatVec &g : gens) {
        RatVec w = ring.multiply(v, g);
        span.push_back(w);
        std::size_t rk = rank(RatMatrix::from_rows(span, rep.dim));
        if (rk > current) {
          current = rk;
          next.push_back(w);
        } else {
          span.pop_back();
        }
      }
    frontier = std::move(next);
  }
  rep.generated_dim = current;
  rep.gc = current == rep.dim;
  auto d0 = ring.class_degree(ring.one_class());
  rep.ec = d0 && *d0 == 0;
  return rep;
}

} // namespace tlg
