#pragma once

#include "tlg/fan.hpp"
#include "tlg/polynomial.hpp"

#include <memory>

namespace tlg {

/// ℚ[𝔇_1..𝔇_n]/(𝒥(Σ) + 𝒦(Σ) + GP monomials) with its generator families kept apart.
struct OrbifoldCohomology {
  std::shared_ptr<const GradedQuotientRing> ring;
  /// Binomials of the saturated lattice ideal of each maximal cone (deduplicated).
  std::vector<Polynomial> cone_binomials;
  /// Relation vectors of those binomials (exponent difference, positive part first).
  std::vector<IntVec> cone_binomial_relations;
  std::vector<Polynomial> euler_forms;
  std::vector<Polynomial> gp_monomials;

  std::vector<Polynomial> all_generators() const;
};

OrbifoldCohomology presentation(const ExtendedStackyFan &ext);

/// Σ_σ |det σ|. Refuses inputs where vol(Q) is not given by that sum: a non-nef
/// anticanonical function, or an extended generator of age > 1 lying outside {φ <= 1}.
Int normalized_volume(const ExtendedStackyFan &ext);

/// Σ_{i<=m} 𝔇_i; the extended classes D̄_{m+k} vanish in H^2.
RatVec first_chern_class(const ExtendedStackyFan &ext, const GradedQuotientRing &ring);
/// diag(deg of standard monomials).
RatMatrix grading_matrix(const GradedQuotientRing &ring);
/// Matrix of −c_1 ∪.
RatMatrix residue_a0(const ExtendedStackyFan &ext, const GradedQuotientRing &ring);
/// Coefficient of the (unique) top standard monomial in x·y.
Rat top_pairing(const GradedQuotientRing &ring, const RatVec &x, const RatVec &y);

/// Lattice ideal of the lattice spanned by `relations` in ℚ[x_1..x_k] (variables with
/// the given degrees): the binomial ideal of a basis saturated by x_1⋯x_k.
std::vector<Polynomial> lattice_ideal(const std::vector<IntVec> &relations, const std::vector<Rat> &degrees);

} // namespace tlg
