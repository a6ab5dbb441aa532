#pragma once

#include "tlg/cohomology.hpp"
#include "tlg/operators.hpp"
#include "tlg/picard.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tlg {

/// Cohomology-side data shared by the series computations.
struct IContext {
  std::shared_ptr<const ExtendedPicardData> pd;
  OrbifoldCohomology coh;
  MoriData mori;
  std::vector<RatVec> d_bar;               ///< D̄_i: 𝔇_i for rays, 0 for extended generators
  std::vector<RatVec> p_bar;               ///< p̄_a, a = 1..r+e
  RatVec rho_bar;                          ///< Σ_a ρ_a p̄_a
  std::map<IntVec, RatVec> sector_classes; ///< 1_v for v ∈ Box (v = 0 included)

  const GradedQuotientRing &ring() const { return *coh.ring; }
  std::size_t k() const { return pd->k(); }
};
IContext make_context(std::shared_ptr<const ExtendedPicardData> pd);

struct SeriesKey {
  std::vector<int> beta;   ///< χ exponents
  std::vector<int> logchi; ///< exponents of log χ_a
  Rat zpow;                ///< exponent of z (rational after grading)
  int logz = 0;            ///< exponent of log z

  bool operator<(const SeriesKey &o) const;
  bool operator==(const SeriesKey &o) const;
  int chi_degree() const;
};

/// Finite sum of c · χ^β (log χ)^κ z^q (log z)^j with c ∈ H*_orb (coordinates in the
/// standard-monomial basis). Complete for χ-degree Σβ <= order.
struct LogSeries {
  std::size_t k = 0;
  std::size_t dim = 0;
  int order = 0;
  std::map<SeriesKey, RatVec> terms;

  void add(const SeriesKey &key, const RatVec &c);
  /// Drops terms of χ-degree above `n` and records the new order.
  LogSeries truncated(int n) const;
  std::string term_string(const SeriesKey &key, const RatVec &c, const GradedQuotientRing &ring) const;
};

struct DegreeTerm {
  IntVec pairings; ///< p_a(d) = exponents of χ
  RatVec delta;    ///< ⟨D_i, d⟩
  IntVec sector;   ///< v(d) ∈ Box
  int total = 0;   ///< Σ_a p_a(d)
};
/// All d ∈ 𝕂^eff with Σ_a p_a(d) <= N, ordered by total degree then lexicographically.
std::vector<DegreeTerm> enumerate_degrees(const IContext &ctx, int N);

/// Π_i of the telescoped ratio times 1_{v(d)}, as z-power ↦ class.
std::map<int, RatVec> hypergeometric_factor(const IContext &ctx, const DegreeTerm &d);

/// exp(Σ_a p̄_a log χ_a / z) · Σ_{d ∈ 𝕂^eff} χ^d · factor(d).
LogSeries i_function(const IContext &ctx, int N);

struct MirrorMap {
  std::vector<RatVec> log_part;        ///< coefficient class of log χ_a
  std::map<std::vector<int>, RatVec> analytic; ///< χ^β ↦ class (β ≠ 0)
  int order = 0;
  bool shape_ok = false;               ///< I − 1 has only z-powers <= −1
  bool values_in_h2 = false;           ///< all classes of degree <= 1
  std::vector<std::string> problems;
};
MirrorMap mirror_map(const IContext &ctx, const LogSeries &I);

/// I z^{−ρ} z^{μ}: z^{μ} scales a class of degree q by z^q; then cup with exp(−ρ̄ log z).
LogSeries tilde_I(const IContext &ctx, const LogSeries &I);

/// Result of an operator applied term by term; the output order is the input order
/// lowered by the largest χ-degree drop of the operator.
LogSeries apply(const LogDiffOp &op, const LogSeries &s);
/// min over the terms of |β| − |t|: how far an operator can lower the χ-degree.
int order_shift(const LogDiffOp &op);

struct AnnihilationReport {
  int valid_order = 0;
  std::size_t residual_terms = 0; ///< nonzero terms within the valid order
  std::vector<std::string> offending;
  bool ok() const { return offending.empty(); }
};
AnnihilationReport annihilation_check(const IContext &ctx, const LogDiffOp &op, const LogSeries &tilde);

} // namespace tlg
