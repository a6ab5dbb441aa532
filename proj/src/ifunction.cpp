#include "tlg/ifunction.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace tlg {

namespace {

RatVec scale(const RatVec &v, const Rat &c) {
  RatVec out = v;
  for (Rat &x : out)
    x *= c;
  return out;
}

void add_into(RatVec &acc, const RatVec &v) {
  for (std::size_t i = 0; i < acc.size(); ++i)
    acc[i] += v[i];
}

bool is_zero_class(const RatVec &v) {
  return std::all_of(v.begin(), v.end(), [](const Rat &q) { return q == 0; });
}

using Laurent = std::map<int, RatVec>;

Laurent times_linear(const Laurent &f, const RatMatrix &Dmult, bool d_zero, const Rat &s) {
  Laurent out;
  const std::size_t dim = Dmult.rows();
  for (const auto &[q, c] : f) {
    if (!d_zero) {
      auto [it, _] = out.try_emplace(q, RatVec(dim));
      add_into(it->second, Dmult * c);
    }
    if (s != 0) {
      auto [it, _] = out.try_emplace(q + 1, RatVec(dim));
      add_into(it->second, scale(c, s));
    }
  }
  return out;
}

/// f / (D + s z) with s ≠ 0: Σ_j (−1)^j D^j s^{−j−1} z^{−j−1}, finite since D is nilpotent.
Laurent divide_linear(const Laurent &f, const RatMatrix &Dmult, bool d_zero, const Rat &s) {
  Laurent out;
  const std::size_t dim = Dmult.rows();
  for (const auto &[q, c] : f) {
    RatVec power = c;
    Rat coef = 1 / s;
    for (int j = 0; !is_zero_class(power); ++j) {
      auto [it, _] = out.try_emplace(q - j - 1, RatVec(dim));
      add_into(it->second, scale(power, coef));
      if (d_zero)
        break;
      power = Dmult * power;
      coef *= -1 / s;
      if (j > static_cast<int>(dim) + 1)
        fail_invariant("hypergeometric factor: divisor class is not nilpotent");
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = is_zero_class(it->second) ? out.erase(it) : std::next(it);
  return out;
}

} // namespace

// ---------------------------------------------------------------------------

IContext make_context(std::shared_ptr<const ExtendedPicardData> pd) {
  IContext ctx{pd, presentation(pd->ext()), mori_lattices(pd), {}, {}, {}, {}};
  const ExtendedStackyFan &ext = pd->ext();
  const GradedQuotientRing &ring = ctx.ring();
  if (!ring.finite())
    fail_invariant("orbifold cohomology presentation is infinite-dimensional");
  const std::size_t dim = ring.dim();
  for (std::size_t i = 0; i < ext.n(); ++i)
    ctx.d_bar.push_back(i < ext.m() ? ring.variable_class(i) : RatVec(dim));
  for (std::size_t a = 0; a < pd->k(); ++a) {
    RatVec c(dim);
    for (std::size_t i = 0; i < ext.m(); ++i)
      add_into(c, scale(ctx.d_bar[i], Rat(pd->lifts(a, i))));
    ctx.p_bar.push_back(c);
  }
  ctx.rho_bar = RatVec(dim);
  for (std::size_t a = 0; a < pd->k(); ++a)
    add_into(ctx.rho_bar, scale(ctx.p_bar[a], pd->rho_in_p[a]));

  ctx.sector_classes[IntVec(ext.rank(), 0)] = ring.one_class();
  for (const BoxCosetEntry &b : box_coset_map(ctx.mori)) {
    Polynomial mono = ring.one();
    for (std::size_t i = 0; i < ext.n(); ++i)
      if (b.decomposition[i] != 0)
        mono = mono * ring.variable(i).pow(static_cast<unsigned>(b.decomposition[i].get_ui()));
    ctx.sector_classes[b.v] = ring.to_class(mono);
  }
  return ctx;
}

// ---------------------------------------------------------------------------

bool SeriesKey::operator<(const SeriesKey &o) const {
  return std::tie(beta, logchi, zpow, logz) < std::tie(o.beta, o.logchi, o.zpow, o.logz);
}

bool SeriesKey::operator==(const SeriesKey &o) const {
  return beta == o.beta && logchi == o.logchi && zpow == o.zpow && logz == o.logz;
}

int SeriesKey::chi_degree() const {
  int s = 0;
  for (int b : beta)
    s += b;
  return s;
}

void LogSeries::add(const SeriesKey &key, const RatVec &c) {
  if (is_zero_class(c))
    return;
  auto [it, inserted] = terms.try_emplace(key, c);
  if (!inserted) {
    add_into(it->second, c);
    if (is_zero_class(it->second))
      terms.erase(it);
  }
}

LogSeries LogSeries::truncated(int n) const {
  LogSeries out{k, dim, std::min(order, n), {}};
  for (const auto &[key, c] : terms)
    if (key.chi_degree() <= n)
      out.terms.emplace(key, c);
  return out;
}

std::string LogSeries::term_string(const SeriesKey &key, const RatVec &c, const GradedQuotientRing &ring) const {
  std::ostringstream os;
  os << "(" << ring.from_class(c).to_string(ring.names()) << ")";
  for (std::size_t a = 0; a < key.beta.size(); ++a)
    if (key.beta[a] != 0)
      os << "*chi" << a + 1 << "^" << key.beta[a];
  for (std::size_t a = 0; a < key.logchi.size(); ++a)
    if (key.logchi[a] != 0)
      os << "*log(chi" << a + 1 << ")^" << key.logchi[a];
  if (key.zpow != 0)
    os << "*z^(" << key.zpow.get_str() << ")";
  if (key.logz != 0)
    os << "*log(z)^" << key.logz;
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<DegreeTerm> enumerate_degrees(const IContext &ctx, int N) {
  const std::size_t k = ctx.k();
  std::vector<DegreeTerm> out;
  // p_a(d) >= 0 on 𝕂^eff (convexity for a <= r, vanishing numerators for a > r), so the
  // nonnegative pairing vectors of total degree <= N cover everything.
  std::vector<int> c(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t a, int left) {
    if (a == k) {
      RatVec cr(k);
      for (std::size_t b = 0; b < k; ++b)
        cr[b] = c[b];
      if (!ctx.mori.in_k_eff(cr))
        return;
      DegreeTerm d;
      for (int x : c)
        d.pairings.push_back(x);
      d.delta = ctx.pd->delta(cr);
      d.sector = ctx.mori.ceiling_map(cr);
      d.total = N - left;
      if (!ctx.sector_classes.count(d.sector))
        fail_invariant("ceiling map produced a vector outside Box");
      out.push_back(std::move(d));
      return;
    }
    for (int x = 0; x <= left; ++x) {
      c[a] = x;
      rec(a + 1, left - x);
    }
    c[a] = 0;
  };
  rec(0, N);
  std::sort(out.begin(), out.end(), [](const DegreeTerm &x, const DegreeTerm &y) {
    return std::tie(x.total, x.pairings) < std::tie(y.total, y.pairings);
  });
  return out;
}

std::map<int, RatVec> hypergeometric_factor(const IContext &ctx, const DegreeTerm &d) {
  const GradedQuotientRing &ring = ctx.ring();
  Laurent f{{0, ctx.sector_classes.at(d.sector)}};
  for (std::size_t i = 0; i < d.delta.size(); ++i) {
    const Rat &delta = d.delta[i];
    Int cint = ceil_rat(delta);
    long c = cint.get_si();
    bool d_zero = is_zero_class(ctx.d_bar[i]);
    RatMatrix Dm = d_zero ? RatMatrix(ring.dim(), ring.dim()) : ring.multiplication_matrix(ctx.d_bar[i]);
    if (c >= 0) {
      // 1 / Π_{ν=0}^{c−1} (D̄ + (δ − ν) z)
      for (long nu = 0; nu < c; ++nu) {
        Rat s = delta - nu;
        if (s == 0)
          fail_invariant("uncancelled zero factor in the denominator of the hypergeometric term");
        f = divide_linear(f, Dm, d_zero, s);
      }
    } else {
      // Π_{ν=c}^{−1} (D̄ + (δ − ν) z)
      for (long nu = c; nu < 0; ++nu)
        f = times_linear(f, Dm, d_zero, delta - nu);
    }
    if (f.empty())
      break;
  }
  for (auto it = f.begin(); it != f.end();)
    it = is_zero_class(it->second) ? f.erase(it) : std::next(it);
  return f;
}

LogSeries i_function(const IContext &ctx, int N) {
  const std::size_t k = ctx.k(), dim = ctx.ring().dim();
  LogSeries hyper{k, dim, N, {}};
  for (const DegreeTerm &d : enumerate_degrees(ctx, N)) {
    SeriesKey key;
    for (const Int &x : d.pairings)
      key.beta.push_back(static_cast<int>(x.get_si()));
    key.logchi.assign(k, 0);
    for (const auto &[q, c] : hypergeometric_factor(ctx, d)) {
      key.zpow = q;
      hyper.add(key, c);
    }
  }
  // exp(Σ_a p̄_a log χ_a / z) = Σ_κ Π_a p̄_a^{κ_a} / κ_a! · (log χ)^κ z^{−|κ|}.
  std::vector<RatMatrix> pm;
  for (std::size_t a = 0; a < k; ++a)
    pm.push_back(ctx.ring().multiplication_matrix(ctx.p_bar[a]));
  std::vector<std::pair<std::vector<int>, RatVec>> prefactor;
  std::vector<int> kappa(k, 0);
  std::function<void(std::size_t, const RatVec &)> rec = [&](std::size_t a, const RatVec &cls) {
    if (a == k) {
      prefactor.emplace_back(kappa, cls);
      return;
    }
    RatVec cur = cls;
    Rat fact = 1;
    for (int j = 0; !is_zero_class(cur); ++j) {
      kappa[a] = j;
      rec(a + 1, scale(cur, 1 / fact));
      cur = pm[a] * cur;
      fact *= j + 1;
      if (j > static_cast<int>(dim) + 1)
        fail_invariant("prefactor class is not nilpotent");
    }
    kappa[a] = 0;
  };
  rec(0, ctx.ring().one_class());

  LogSeries I{k, dim, N, {}};
  for (const auto &[key, c] : hyper.terms)
    for (const auto &[kap, pc] : prefactor) {
      SeriesKey nk = key;
      nk.logchi = kap;
      int total = 0;
      for (int x : kap)
        total += x;
      nk.zpow -= total;
      I.add(nk, ctx.ring().multiply(c, pc));
    }
  return I;
}

MirrorMap mirror_map(const IContext &ctx, const LogSeries &I) {
  const GradedQuotientRing &ring = ctx.ring();
  const std::size_t k = I.k;
  MirrorMap mm;
  mm.order = I.order;
  mm.log_part.assign(k, RatVec(I.dim));
  mm.shape_ok = true;
  const RatVec one = ring.one_class();
  for (const auto &[key, c] : I.terms) {
    bool constant_one = key.chi_degree() == 0 && key.zpow == 0 && key.logz == 0 &&
                        std::all_of(key.logchi.begin(), key.logchi.end(), [](int x) { return x == 0; });
    if (constant_one && c == one)
      continue;
    if (key.zpow > -1) {
      mm.shape_ok = false;
      mm.problems.push_back("term with z-exponent above -1: " + I.term_string(key, c, ring));
      continue;
    }
    if (key.zpow != -1 || key.logz != 0)
      continue;
    int logs = 0;
    std::size_t which = 0;
    for (std::size_t a = 0; a < k; ++a)
      if (key.logchi[a] != 0) {
        logs += key.logchi[a];
        which = a;
      }
    if (logs == 0) {
      auto [it, _] = mm.analytic.try_emplace(key.beta, RatVec(I.dim));
      add_into(it->second, c);
    } else if (logs == 1 && key.chi_degree() == 0) {
      add_into(mm.log_part[which], c);
    } else {
      mm.problems.push_back("log term outside the linear part: " + I.term_string(key, c, ring));
    }
  }
  for (auto it = mm.analytic.begin(); it != mm.analytic.end();)
    it = is_zero_class(it->second) ? mm.analytic.erase(it) : std::next(it);
  mm.values_in_h2 = true;
  auto check_degree = [&](const RatVec &c) {
    const auto &deg = ring.basis_degrees();
    for (std::size_t b = 0; b < c.size(); ++b)
      if (c[b] != 0 && deg[b] > 1)
        return false;
    return true;
  };
  for (const RatVec &c : mm.log_part)
    mm.values_in_h2 = mm.values_in_h2 && check_degree(c);
  for (const auto &[beta, c] : mm.analytic)
    if (!check_degree(c)) {
      mm.values_in_h2 = false;
      mm.problems.push_back("mirror map coefficient of degree above 1");
    }
  return mm;
}

LogSeries tilde_I(const IContext &ctx, const LogSeries &I) {
  const GradedQuotientRing &ring = ctx.ring();
  const auto &deg = ring.basis_degrees();
  // z^{μ}: split each class into homogeneous pieces.
  LogSeries graded{I.k, I.dim, I.order, {}};
  for (const auto &[key, c] : I.terms)
    for (std::size_t b = 0; b < c.size(); ++b) {
      if (c[b] == 0)
        continue;
      RatVec piece(I.dim);
      piece[b] = c[b];
      SeriesKey nk = key;
      nk.zpow += deg[b];
      graded.add(nk, piece);
    }
  // Cup with exp(−ρ̄ log z).
  RatMatrix rm = ring.multiplication_matrix(ctx.rho_bar);
  LogSeries out{I.k, I.dim, I.order, {}};
  for (const auto &[key, c] : graded.terms) {
    RatVec cur = c;
    Rat coef = 1;
    for (int j = 0; !is_zero_class(cur); ++j) {
      SeriesKey nk = key;
      nk.logz += j;
      out.add(nk, scale(cur, coef));
      cur = rm * cur;
      coef /= -(j + 1);
      if (j > static_cast<int>(I.dim) + 1)
        fail_invariant("first Chern class is not nilpotent");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// z χ_a ∂_{χ_a} on χ^β (log χ)^κ z^q (log z)^j.
LogSeries act_log_derivation(const LogSeries &s, std::size_t a) {
  LogSeries out{s.k, s.dim, s.order, {}};
  for (const auto &[key, c] : s.terms) {
    SeriesKey nk = key;
    nk.zpow += 1;
    if (key.beta[a] != 0)
      out.add(nk, scale(c, key.beta[a]));
    if (key.logchi[a] != 0) {
      SeriesKey lk = nk;
      lk.logchi[a] -= 1;
      out.add(lk, scale(c, key.logchi[a]));
    }
  }
  return out;
}

// z ∂_{χ_b}.
LogSeries act_dchi(const LogSeries &s, std::size_t b) {
  LogSeries out{s.k, s.dim, s.order - 1, {}};
  for (const auto &[key, c] : s.terms) {
    if (key.logchi[b] != 0)
      fail_invariant("z d/dchi applied to a log chi term of an extended variable");
    if (key.beta[b] == 0)
      continue;
    SeriesKey nk = key;
    nk.zpow += 1;
    nk.beta[b] -= 1;
    out.add(nk, scale(c, key.beta[b]));
  }
  return out;
}

// z² ∂_z.
LogSeries act_euler(const LogSeries &s) {
  LogSeries out{s.k, s.dim, s.order, {}};
  for (const auto &[key, c] : s.terms) {
    SeriesKey nk = key;
    nk.zpow += 1;
    if (key.zpow != 0)
      out.add(nk, scale(c, key.zpow));
    if (key.logz != 0) {
      SeriesKey lk = nk;
      lk.logz -= 1;
      out.add(lk, scale(c, key.logz));
    }
  }
  return out;
}

} // namespace

int order_shift(const LogDiffOp &op) {
  int shift = 0;
  bool first = true;
  for (const auto &[key, c] : op.terms()) {
    int v = 0;
    for (std::size_t a = 0; a < op.k(); ++a)
      v += op.chi_exp(key, a) - (a >= op.r() ? op.der_exp(key, a) : 0);
    shift = first ? v : std::min(shift, v);
    first = false;
  }
  return shift;
}

LogSeries apply(const LogDiffOp &op, const LogSeries &s) {
  if (op.k() != s.k)
    throw std::invalid_argument("apply: operator and series have different variable counts");
  LogSeries out{s.k, s.dim, s.order + std::min(0, order_shift(op)), {}};
  for (const auto &[key, c] : op.terms()) {
    LogSeries acc = s;
    for (int i = 0; i < op.euler_exp(key); ++i)
      acc = act_euler(acc);
    for (std::size_t a = op.k(); a-- > 0;)
      for (int i = 0; i < op.der_exp(key, a); ++i)
        acc = a < op.r() ? act_log_derivation(acc, a) : act_dchi(acc, a);
    for (const auto &[sk, sc] : acc.terms) {
      SeriesKey nk = sk;
      for (std::size_t a = 0; a < op.k(); ++a)
        nk.beta[a] += op.chi_exp(key, a);
      nk.zpow += op.z_exp(key);
      out.add(nk, scale(sc, c));
    }
  }
  return out;
}

AnnihilationReport annihilation_check(const IContext &ctx, const LogDiffOp &op, const LogSeries &tilde) {
  AnnihilationReport rep;
  LogSeries res = apply(op, tilde);
  rep.valid_order = tilde.order + order_shift(op);
  for (const auto &[key, c] : res.terms) {
    if (key.chi_degree() > rep.valid_order)
      continue;
    ++rep.residual_terms;
    if (rep.offending.size() < 20)
      rep.offending.push_back(res.term_string(key, c, ctx.ring()));
  }
  return rep;
}

} // namespace tlg
