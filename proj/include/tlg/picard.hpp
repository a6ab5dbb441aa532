#pragma once

#include "tlg/cone.hpp"
#include "tlg/fan.hpp"

#include <memory>
#include <optional>

namespace tlg {

/// Lattices and cones on the Picard side. Elements of 𝕃* are written in the
/// coordinates dual to the chosen 𝕃 basis (the columns of T), i.e. u ↦ u·T for
/// u ∈ (ℤ^n)*; elements of 𝕃⊗ℚ in the coordinates of that basis.
struct PicardLattices {
  std::shared_ptr<const ExtendedStackyFan> ext;
  std::size_t k = 0; ///< rank of 𝕃 = r + e

  std::vector<IntVec> pl_basis;        ///< 𝐊 = Θ(PL(Σ)) ⊂ (ℤ^n)*
  std::vector<IntVec> pl_ext_basis;    ///< PL(Σ^e) ⊂ (ℤ^n)*
  std::vector<IntVec> theta_pic_basis; ///< θ(Pic X) ⊂ 𝕃*
  std::vector<IntVec> pic_ext_basis;   ///< Pic^e(X) ⊂ 𝕃*
  std::vector<IntVec> divisor_classes; ///< [D_i] ∈ 𝕃*, i = 1..n

  RationalCone kahler;        ///< 𝒦 ⊂ 𝕃*⊗ℚ, H-description (with extreme rays attached)
  IntVec rho;                 ///< ρ = Σ_{i<=n} [D_i]
  RatVec rho_bar;             ///< class of the PL function with value 1 on rays

  /// Coordinates in 𝕃⊗ℚ of a rational relation vector (entries indexed by generators).
  RatVec relation_coordinates(const RatVec &relation) const;
  /// Lift of u ∈ 𝕃* to (ℤ^n)*.
  IntVec lift(const IntVec &u) const;
  /// Image in 𝕃* of a functional on ℤ^n.
  IntVec restrict_to_lattice(const IntVec &x) const;
};

std::vector<IntVec> pl_lattice(const ExtendedStackyFan &ext);
PicardLattices extended_pl_and_pic(std::shared_ptr<const ExtendedStackyFan> ext);
RationalCone kahler_cone(const PicardLattices &pic);
/// 𝒦^e = 𝒦 + Σ ℚ_{>=0}[D_{m+k}], by generators.
RationalCone extended_kahler_cone(const PicardLattices &pic);

struct RhoMembership {
  bool via_lp = false;
  bool via_degree = false;
  bool nef = false;          ///< ρ̄ ∈ 𝒦̄
  bool ages_at_most_one = false;
};
RhoMembership rho_membership(const PicardLattices &pic);

struct ExtendedPicardData {
  PicardLattices lattices;
  IntMatrix P;   ///< rows p_1..p_{r+e} ∈ 𝕃*
  IntMatrix lifts; ///< rows: lifts of p_a to (ℤ^n)*; also the matrix N = (n_{ai})
  RatMatrix M;   ///< n × (r+e), [D_i] = Σ_a m_{ia} p_a
  RatVec rho_in_p;
  bool user_supplied = false;

  const ExtendedStackyFan &ext() const { return *lattices.ext; }
  std::size_t r() const { return ext().r(); }
  std::size_t k() const { return lattices.k; }
  /// p_a(l) for a relation vector l (integer or rational).
  RatVec pairings(const RatVec &relation) const;
  /// ⟨D_i, d⟩ = Σ_a m_{ia} c_a for d given by its pairings c.
  RatVec delta(const RatVec &c) const;
  /// Lifts of the p_a in Θ(PL)-compatible form restricted to rays and images
  /// D_i ↦ 𝔇_i (i <= m), D_{m+k} ↦ 0.
  std::vector<RatVec> p_bar_coefficients() const;
};

/// Basis validation messages (empty iff the three basis conditions hold).
std::vector<std::string> check_basis_p(const PicardLattices &pic, const IntMatrix &P);
/// Deterministic search; `override_lifts` (functionals on ℤ^n, r+e of them) replaces it.
ExtendedPicardData choose_basis_p(const PicardLattices &pic,
                                  const std::optional<std::vector<IntVec>> &override_lifts = std::nullopt);

struct SuperpotentialTerm {
  Rat coefficient;
  IntVec chi_exponent; ///< n_i ∈ ℤ^{r+e}
  IntVec y_exponent;   ///< a_i ∈ N
};
std::vector<SuperpotentialTerm> superpotential(const ExtendedPicardData &pd);

/// Mori-side predicates on d ∈ 𝕃⊗ℚ given by pairings c = (p_a(d)).
struct MoriData {
  std::shared_ptr<const ExtendedPicardData> pd;

  bool in_ne(const RatVec &c) const; ///< all pairings integral
  bool in_k(const RatVec &c) const;
  bool in_k_eff(const RatVec &c) const;
  /// v(d) = Σ ⌈⟨D_i,d⟩⌉ a_i.
  IntVec ceiling_map(const RatVec &c) const;
};
MoriData mori_lattices(std::shared_ptr<const ExtendedPicardData> pd);

/// Nonnegative integer decompositions Σ n_i a_i = target over the generators lying in
/// the given cone (ray index set), smallest total first, then lexicographic; the first
/// one found, or nullopt.
std::optional<IntVec> nonneg_decomposition(const ExtendedStackyFan &ext, const IndexSet &cone, const IntVec &target);

struct BoxCosetEntry {
  IntVec v;
  IntVec decomposition; ///< n_i with v = Σ n_i a_i over generators of σ(v)
  RatVec relation;      ///< ⟨D_i, d_v⟩ = n_i − r_i
  IntVec pairings;      ///< p_a(d_v)
};
/// Fails (invariant) if a round trip v(d_v) = v or injectivity breaks.
std::vector<BoxCosetEntry> box_coset_map(const MoriData &mori);

} // namespace tlg
