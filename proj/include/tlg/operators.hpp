#pragma once

#include "tlg/cohomology.hpp"
#include "tlg/picard.hpp"
#include "tlg/polynomial.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tlg {

/// Element of the ring generated by χ_1..χ_{r+e}, z, θ_a = zχ_a∂_{χ_a} (a <= r),
/// ∂'_b = z∂_{χ_b} (b > r) and E = z²∂_z, stored in normal order
///   c · χ^β z^k θ^s ∂'^t E^u
/// (functions on the left, derivations on the right). Indices are 0-based, so the
/// θ's are variables 0..r-1 and the ∂''s are r..r+e-1.
class LogDiffOp {
public:
  /// Flattened exponent vector [β (r+e), k, s (r), t (e), u].
  using Key = std::vector<int>;

  LogDiffOp(std::size_t r, std::size_t e) : r_(r), e_(e) {}

  static LogDiffOp constant(std::size_t r, std::size_t e, const Rat &c);
  static LogDiffOp chi(std::size_t r, std::size_t e, std::size_t a, int power = 1);
  static LogDiffOp z(std::size_t r, std::size_t e, int power = 1);
  static LogDiffOp theta(std::size_t r, std::size_t e, std::size_t a);
  static LogDiffOp dchi(std::size_t r, std::size_t e, std::size_t b);
  static LogDiffOp euler(std::size_t r, std::size_t e);
  /// zχ_a∂_{χ_a} for any a (θ_a if a < r, χ_a∂'_a otherwise).
  static LogDiffOp log_derivation(std::size_t r, std::size_t e, std::size_t a);

  std::size_t r() const { return r_; }
  std::size_t e() const { return e_; }
  std::size_t k() const { return r_ + e_; }
  const std::map<Key, Rat> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Views into a key.
  int chi_exp(const Key &key, std::size_t a) const { return key[a]; }
  int z_exp(const Key &key) const { return key[k()]; }
  /// Exponent of the a-th derivation (θ_a for a < r, ∂'_a otherwise).
  int der_exp(const Key &key, std::size_t a) const { return key[k() + 1 + a]; }
  int euler_exp(const Key &key) const { return key[2 * k() + 1]; }
  /// |s| + |t| + u.
  int order(const Key &key) const;
  /// Maximal order over the terms (−1 for zero).
  int order() const;

  void add_term(const Key &key, const Rat &c);
  LogDiffOp operator+(const LogDiffOp &o) const;
  LogDiffOp operator-(const LogDiffOp &o) const;
  LogDiffOp operator-() const { return scaled(-1); }
  LogDiffOp operator*(const LogDiffOp &o) const;
  LogDiffOp scaled(const Rat &c) const;
  LogDiffOp pow(unsigned n) const;
  bool operator==(const LogDiffOp &o) const { return r_ == o.r_ && e_ == o.e_ && terms_ == o.terms_; }

  std::string to_string() const;

private:
  Key zero_key() const { return Key(2 * k() + 2, 0); }
  void check_shape(const LogDiffOp &o) const;
  // Left multiplication of this operator by a single generator.
  LogDiffOp left_theta(std::size_t a) const;
  LogDiffOp left_dchi(std::size_t b) const;
  LogDiffOp left_euler() const;

  std::size_t r_, e_;
  std::map<Key, Rat> terms_;
};

/// Reference GKZ operators on the λ-side: χ_b stands for λ_b and ∂'_b for z∂_{λ_b}
/// (shape r = 0, e = n).
LogDiffOp box_hat(const IntVec &l);
/// Ê_k = Σ_i a_{ki} zλ_i∂_{λ_i} for each row k of A.
std::vector<LogDiffOp> euler_hat_k(const ExtendedStackyFan &ext);
/// Ê = z²∂_z + Σ_i zλ_i∂_{λ_i}.
LogDiffOp euler_hat(const ExtendedStackyFan &ext);

/// 𝒟̃_i = Σ_a m_{ia} zχ_a∂_{χ_a}, 0 <= i < n.
LogDiffOp d_tilde(const ExtendedPicardData &pd, std::size_t i);
/// 𝒟_i: equal to 𝒟̃_i for rays, z∂_{χ_{r+j}} for the extended generator j.
LogDiffOp d_script(const ExtendedPicardData &pd, std::size_t i);

/// □̃_l. Fails (validation) unless l ∈ 𝕃.
LogDiffOp box_tilde(const ExtendedPicardData &pd, const IntVec &l);
/// Π_{j} χ_{r+j}^{|l_{m+j}|}.
LogDiffOp factorization_prefactor(const ExtendedPicardData &pd, const IntVec &l);
/// □^X_l, checked against □̃_l = prefactor · □^X_l (invariant error on failure).
/// Each product places the extended factors z∂_{χ_{r+j}} to the left of the ray factors.
LogDiffOp box_X(const ExtendedPicardData &pd, const IntVec &l);
/// Ě = z²∂_z + Σ_a Σ_i m_{ia} zχ_a∂_{χ_a}.
LogDiffOp euler_check(const ExtendedPicardData &pd);

/// Limit at z = χ = 0: E is first replaced by its class E − Ě modulo Ě, then every
/// term carrying a power of z or χ is dropped. The result only involves θ_a and ∂'_b.
LogDiffOp degenerate_limit(const ExtendedPicardData &pd, const LogDiffOp &op);

/// Commutative polynomials for symbols. Variables: z, χ_1..χ_k, ξ_1..ξ_k, ξ_E.
OrderPtr symbol_order(std::size_t k);
std::vector<std::string> symbol_names(std::size_t k);
/// Top-order part, θ_a ↦ ξ_a, ∂'_b ↦ ξ_b, E ↦ ξ_E.
Polynomial symbol(const LogDiffOp &op);
/// ℚ[ξ_1..ξ_k] with all variables of weight 1.
OrderPtr fiber_order(std::size_t k);
/// Symbol restricted to z = χ = 0, as a polynomial in ξ_1..ξ_k (ξ_E set to 0).
Polynomial fiber_symbol(const LogDiffOp &op);

/// Relation families whose boxes generate the operator ideal at the limit point.
struct RelationFamilies {
  std::vector<IntVec> basis;     ///< the 𝕃 basis
  std::vector<IntVec> cone;      ///< relations of the saturated per-cone lattice ideals
  std::vector<IntVec> primitive; ///< one l_I per generalized primitive collection I
  std::vector<IndexSet> primitive_collections;
};
/// l_I = Σ_{i∈I} e_i − Σ_j n_j e_j with Σ n_j a_j = Σ_{i∈I} a_i over the generators of
/// the minimal cone containing that sum (n from nonneg_decomposition).
IntVec primitive_relation(const ExtendedStackyFan &ext, const IndexSet &I);
RelationFamilies relation_families(const ExtendedPicardData &pd, const OrbifoldCohomology &coh);

enum FamilyMask : unsigned {
  FamilyBasis = 1u,
  FamilyCone = 2u,
  FamilyPrimitive = 4u,
  FamilyAll = 7u,
};

/// ℚ[ξ_1..ξ_k] modulo the limits of the boxes of the selected families and the Euler
/// relations Σ_{i<=m} a_{ki}𝐃_i, graded by deg ξ_a = 1 (a <= r), deg ξ_{r+j} = age.
struct ResidueAlgebra {
  std::shared_ptr<const GradedQuotientRing> ring;
  std::vector<Polynomial> D; ///< 𝐃_i ∈ ℚ[ξ], i = 1..n
  std::vector<Polynomial> relations;
};
ResidueAlgebra residue_algebra(const ExtendedPicardData &pd, const OrbifoldCohomology &coh,
                               unsigned families = FamilyAll);

struct ResidueComparison {
  std::optional<std::size_t> residue_dim; ///< nullopt: infinite
  std::optional<std::size_t> cohomology_dim;
  bool well_defined = false; ///< every H*_orb generator maps to 0 under 𝔇_i ↦ 𝐃_i
  bool graded_dims_agree = false;
  bool isomorphic = false;
};
ResidueComparison compare_with_cohomology(const ResidueAlgebra &res, const OrbifoldCohomology &coh);

/// dim ℚ[ξ]/(fiber symbols of the boxes of the selected families, Euler symbols);
/// nullopt when infinite.
std::optional<std::size_t> symbol_fiber_dimension(const ExtendedPicardData &pd, const OrbifoldCohomology &coh,
                                                  unsigned families = FamilyAll);

struct FamilySensitivity {
  std::optional<std::size_t> full;
  std::vector<std::pair<FamilyMask, std::optional<std::size_t>>> without; ///< dimension with one family dropped
  /// Some single-family removal makes the dimension grow or become infinite.
  bool sensitive = false;
};
/// Families are deduplicated first (a relation counts for the first family among
/// primitive, cone, basis that contains it up to sign).
FamilySensitivity symbol_fiber_sensitivity(const ExtendedPicardData &pd, const OrbifoldCohomology &coh);

struct UnfoldingReport {
  bool ic = false; ///< classes of ξ_1..ξ_k linearly independent
  bool gc = false; ///< 1 generates under multiplication by ξ_1..ξ_k
  bool ec = false; ///< 1 homogeneous of degree 0
  std::size_t generated_dim = 0;
  std::size_t dim = 0;
};
UnfoldingReport check_unfolding_conditions(const ResidueAlgebra &res);

} // namespace tlg
