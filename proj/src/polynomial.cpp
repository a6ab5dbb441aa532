#include "tlg/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tlg {

long MonomialOrder::weighted_degree(const Monomial &m) const {
  long s = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    s += weights[i] * m[i];
  return s;
}

bool MonomialOrder::greater(const Monomial &a, const Monomial &b) const {
  if (elim > 0) {
    long sa = 0, sb = 0;
    for (std::size_t i = 0; i < elim; ++i) {
      sa += a[i];
      sb += b[i];
    }
    if (sa != sb)
      return sa > sb;
  }
  long da = weighted_degree(a), db = weighted_degree(b);
  if (da != db)
    return da > db;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i])
      return a[i] < b[i];
  return false;
}

Polynomial::Polynomial(OrderPtr ord, std::vector<Term> terms) : ord_(std::move(ord)) {
  std::sort(terms.begin(), terms.end(), [&](const Term &x, const Term &y) { return ord_->greater(x.first, y.first); });
  for (Term &t : terms) {
    if (!terms_.empty() && terms_.back().first == t.first)
      terms_.back().second += t.second;
    else
      terms_.push_back(std::move(t));
    if (terms_.back().second == 0)
      terms_.pop_back();
  }
}

Polynomial Polynomial::constant(OrderPtr ord, const Rat &c) {
  Monomial z(ord->nvars(), 0);
  return monomial(ord, z, c);
}

Polynomial Polynomial::variable(OrderPtr ord, std::size_t i) {
  Monomial m(ord->nvars(), 0);
  m[i] = 1;
  return monomial(ord, m, 1);
}

Polynomial Polynomial::monomial(OrderPtr ord, Monomial m, const Rat &c) {
  Polynomial p(std::move(ord));
  if (c != 0)
    p.terms_.push_back({std::move(m), c});
  return p;
}

Rat Polynomial::coefficient(const Monomial &m) const {
  for (const Term &t : terms_)
    if (t.first == m)
      return t.second;
  return 0;
}

namespace {

Polynomial merge(const Polynomial &a, const Polynomial &b, const Rat &sb) {
  std::vector<Polynomial::Term> out;
  const auto &x = a.terms(), &y = b.terms();
  const MonomialOrder &ord = *a.order();
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && ord.greater(x[i].first, y[j].first))) {
      out.push_back(x[i++]);
    } else if (i == x.size() || ord.greater(y[j].first, x[i].first)) {
      out.push_back({y[j].first, sb * y[j].second});
      ++j;
    } else {
      Rat c = x[i].second + sb * y[j].second;
      if (c != 0)
        out.push_back({x[i].first, c});
      ++i;
      ++j;
    }
  }
  return Polynomial(a.order(), std::move(out));
}

} // namespace

Polynomial Polynomial::operator+(const Polynomial &o) const { return merge(*this, o, Rat(1)); }
Polynomial Polynomial::operator-(const Polynomial &o) const { return merge(*this, o, Rat(-1)); }

Polynomial Polynomial::scaled(const Rat &c) const {
  Polynomial p(ord_);
  if (c == 0)
    return p;
  p.terms_ = terms_;
  for (Term &t : p.terms_)
    t.second *= c;
  return p;
}

Polynomial Polynomial::times_term(const Monomial &m, const Rat &c) const {
  Polynomial p(ord_);
  if (c == 0)
    return p;
  p.terms_.reserve(terms_.size());
  for (const Term &t : terms_) {
    Monomial e = t.first;
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] += m[i];
    p.terms_.push_back({std::move(e), t.second * c});
  }
  return p;
}

Polynomial Polynomial::operator*(const Polynomial &o) const {
  std::vector<Term> all;
  for (const Term &s : terms_)
    for (const Term &t : o.terms_) {
      Monomial e = s.first;
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += t.first[i];
      all.push_back({std::move(e), s.second * t.second});
    }
  return Polynomial(ord_, std::move(all));
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(ord_, 1);
  for (unsigned i = 0; i < k; ++i)
    r = r * *this;
  return r;
}

Polynomial Polynomial::reordered(OrderPtr ord) const { return Polynomial(std::move(ord), terms_); }

std::string Polynomial::to_string(const std::vector<std::string> &names) const {
  if (terms_.empty())
    return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto &[m, c] = terms_[k];
    bool is_one = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    Rat a = abs(c);
    out += (c < 0 ? (k ? " - " : "-") : (k ? " + " : ""));
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0)
        mono += (mono.empty() ? "" : "*") + names[i] + (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
    if (is_one)
      out += a.get_str();
    else if (a == 1)
      out += mono;
    else
      out += a.get_str() + "*" + mono;
  }
  return out;
}

bool divides(const Monomial &a, const Monomial &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i])
      return false;
  return true;
}

Monomial monomial_lcm(const Monomial &a, const Monomial &b) {
  Monomial l(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    l[i] = std::max(a[i], b[i]);
  return l;
}

Polynomial reduce(const Polynomial &f, const std::vector<Polynomial> &G) {
  std::vector<Polynomial::Term> rem;
  Polynomial p = f;
  while (!p.is_zero()) {
    const Monomial &lm = p.lead_monomial();
    const Polynomial *div = nullptr;
    for (const Polynomial &g : G)
      if (!g.is_zero() && divides(g.lead_monomial(), lm)) {
        div = &g;
        break;
      }
    if (!div) {
      rem.push_back(p.terms().front());
      p = p - Polynomial::monomial(p.order(), lm, p.lead_coefficient());
      continue;
    }
    Monomial shift(lm.size());
    for (std::size_t i = 0; i < lm.size(); ++i)
      shift[i] = lm[i] - div->lead_monomial()[i];
    p = p - div->times_term(shift, p.lead_coefficient() / div->lead_coefficient());
  }
  return Polynomial(f.order(), std::move(rem));
}

std::vector<Polynomial> groebner_basis(std::vector<Polynomial> gens, std::size_t max_reductions) {
  std::vector<Polynomial> G;
  for (Polynomial &g : gens)
    if (!g.is_zero())
      G.push_back(g.scaled(1 / g.lead_coefficient()));
  if (G.empty())
    return G;
  const MonomialOrder &ord = *G.front().order();
  using Pair = std::pair<std::size_t, std::size_t>;
  std::vector<Pair> pairs;
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      pairs.push_back({i, j});
  std::size_t reductions = 0;
  while (!pairs.empty()) {
    // Normal strategy: smallest lcm first (ties by index) for a deterministic run.
    auto best = pairs.begin();
    Monomial best_l = monomial_lcm(G[best->first].lead_monomial(), G[best->second].lead_monomial());
    for (auto it = pairs.begin() + 1; it != pairs.end(); ++it) {
      Monomial l = monomial_lcm(G[it->first].lead_monomial(), G[it->second].lead_monomial());
      if (ord.greater(best_l, l)) {
        best = it;
        best_l = l;
      }
    }
    auto [i, j] = *best;
    pairs.erase(best);
    const Monomial &li = G[i].lead_monomial(), &lj = G[j].lead_monomial();
    bool coprime = true;
    for (std::size_t v = 0; v < li.size(); ++v)
      if (li[v] > 0 && lj[v] > 0)
        coprime = false;
    if (coprime)
      continue;
    // Chain criterion: some k with LM_k | lcm and both (i,k), (j,k) already processed.
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == i || k == j || !divides(G[k].lead_monomial(), best_l))
        continue;
      auto pending = [&](std::size_t a, std::size_t b) {
        Pair p{std::min(a, b), std::max(a, b)};
        return std::find(pairs.begin(), pairs.end(), p) != pairs.end();
      };
      if (!pending(i, k) && !pending(j, k))
        chain = true;
    }
    if (chain)
      continue;
    if (++reductions > max_reductions)
      fail_resource("Gröbner basis computation exceeded the reduction limit");
    Monomial si(li.size()), sj(lj.size());
    for (std::size_t v = 0; v < li.size(); ++v) {
      si[v] = best_l[v] - li[v];
      sj[v] = best_l[v] - lj[v];
    }
    Polynomial s = G[i].times_term(si, Rat(1)) - G[j].times_term(sj, Rat(1));
    Polynomial h = reduce(s, G);
    if (h.is_zero())
      continue;
    G.push_back(h.scaled(1 / h.lead_coefficient()));
    for (std::size_t k = 0; k + 1 < G.size(); ++k)
      pairs.push_back({k, G.size() - 1});
  }
  // Minimalize and interreduce.
  std::vector<Polynomial> minimal;
  for (std::size_t a = 0; a < G.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < G.size() && !redundant; ++b) {
      if (a == b || !divides(G[b].lead_monomial(), G[a].lead_monomial()))
        continue;
      if (G[b].lead_monomial() != G[a].lead_monomial() || b < a)
        redundant = true;
    }
    if (!redundant)
      minimal.push_back(G[a]);
  }
  std::vector<Polynomial> reduced;
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    std::vector<Polynomial> others;
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if (b != a)
        others.push_back(minimal[b]);
    Polynomial lead = Polynomial::monomial(minimal[a].order(), minimal[a].lead_monomial(), 1);
    Polynomial tail = minimal[a] - lead;
    reduced.push_back(lead + reduce(tail, others));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const Polynomial &x, const Polynomial &y) {
    return ord.greater(y.lead_monomial(), x.lead_monomial());
  });
  return reduced;
}

std::optional<std::vector<Monomial>> standard_monomials(const std::vector<Polynomial> &gb, std::size_t nvars) {
  std::vector<int> bound(nvars, -1);
  for (const Polynomial &g : gb) {
    const Monomial &lm = g.lead_monomial();
    std::size_t nz = 0, var = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (lm[i] > 0) {
        ++nz;
        var = i;
      }
    if (nz == 0)
      return std::vector<Monomial>{}; // unit ideal
    if (nz == 1 && (bound[var] < 0 || lm[var] < bound[var]))
      bound[var] = lm[var];
  }
  for (int b : bound)
    if (b < 0)
      return std::nullopt;
  std::vector<Monomial> out;
  Monomial m(nvars, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == nvars) {
      for (const Polynomial &g : gb)
        if (divides(g.lead_monomial(), m))
          return;
      out.push_back(m);
      return;
    }
    for (int e = 0; e < bound[i]; ++e) {
      m[i] = e;
      rec(i + 1);
    }
    m[i] = 0;
  };
  rec(0);
  return out;
}

std::vector<long> integer_weights(const std::vector<Rat> &degrees) {
  Int den = 1;
  for (const Rat &q : degrees) {
    if (q <= 0)
      throw std::invalid_argument("integer_weights: degrees must be positive");
    den = lcm_int(den, q.get_den());
  }
  std::vector<long> w;
  for (const Rat &q : degrees)
    w.push_back(Rat(q * den).get_num().get_si());
  return w;
}

GradedQuotientRing::GradedQuotientRing(std::vector<std::string> names, std::vector<Rat> degrees,
                                       std::vector<Polynomial> generators)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
  auto ord = std::make_shared<MonomialOrder>();
  ord->weights = integer_weights(degrees_);
  ord_ = ord;
  for (const Polynomial &g : generators)
    generators_.push_back(g.reordered(ord_));
  gb_ = groebner_basis(generators_);
  auto sm = standard_monomials(gb_, nvars());
  finite_ = sm.has_value();
  if (!finite_)
    return;
  basis_ = *sm;
  std::sort(basis_.begin(), basis_.end(), [&](const Monomial &a, const Monomial &b) { return ord_->greater(b, a); });
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Rat deg = 0;
    for (std::size_t v = 0; v < nvars(); ++v)
      deg += degrees_[v] * basis_[i][v];
    basis_degrees_.push_back(deg);
    index_[basis_[i]] = i;
  }
}

void GradedQuotientRing::require_finite() const {
  if (!finite_)
    fail_invariant("quotient ring is infinite-dimensional (ideal not zero-dimensional)");
}

std::size_t GradedQuotientRing::dim() const {
  require_finite();
  return basis_.size();
}

const std::vector<Monomial> &GradedQuotientRing::basis() const {
  require_finite();
  return basis_;
}

const std::vector<Rat> &GradedQuotientRing::basis_degrees() const {
  require_finite();
  return basis_degrees_;
}

std::map<Rat, std::size_t> GradedQuotientRing::graded_dims() const {
  require_finite();
  std::map<Rat, std::size_t> out;
  for (const Rat &d : basis_degrees_)
    ++out[d];
  return out;
}

Polynomial GradedQuotientRing::normal_form(const Polynomial &f) const { return reduce(f.reordered(ord_), gb_); }

RatVec GradedQuotientRing::to_class(const Polynomial &f) const {
  require_finite();
  RatVec c(basis_.size());
  const Polynomial nf = normal_form(f);
  for (const auto &[m, q] : nf.terms())
    c[index_.at(m)] = q;
  return c;
}

Polynomial GradedQuotientRing::from_class(const RatVec &c) const {
  require_finite();
  std::vector<Polynomial::Term> terms;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0)
      terms.push_back({basis_[i], c[i]});
  return Polynomial(ord_, std::move(terms));
}

RatVec GradedQuotientRing::multiply(const RatVec &a, const RatVec &b) const {
  return to_class(from_class(a) * from_class(b));
}

RatMatrix GradedQuotientRing::multiplication_matrix(const RatVec &c) const {
  require_finite();
  const std::size_t n = basis_.size();
  RatMatrix M(n, n);
  Polynomial pc = from_class(c);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec col = to_class(Polynomial::monomial(ord_, basis_[j]) * pc);
    for (std::size_t i = 0; i < n; ++i)
      M(i, j) = col[i];
  }
  return M;
}

std::optional<Rat> GradedQuotientRing::class_degree(const RatVec &c) const {
  std::optional<Rat> deg;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0)
      continue;
    if (deg && *deg != basis_degrees_[i])
      return std::nullopt;
    deg = basis_degrees_[i];
  }
  return deg;
}

} // namespace tlg
