#pragma once

#include "tlg/cone.hpp"
#include "tlg/fan.hpp"
#include "tlg/picard.hpp"

#include <optional>
#include <vector>

namespace tlg {

/// X and a smooth complete refinement Z whose first m rays are the rays of X.
struct ResolutionPair {
  StackyFan X;
  StackyFan Z;

  std::size_t m() const { return X.num_rays(); }
  std::vector<IntVec> new_rays() const;
};
/// Validates both fans, smoothness of Z, the shared rays and the refinement property.
ResolutionPair make_resolution_pair(StackyFan X, StackyFan Z);

struct CrepancyWitness {
  IntVec ray;
  IndexSet cone; ///< minimal cone of Σ_X containing the ray
  RatVec coords;
  Rat degree;
  Rat discrepancy; ///< degree − 1
};
struct CrepancyReport {
  bool crepant = true;
  std::vector<CrepancyWitness> witnesses;
};
CrepancyReport is_crepant(const ResolutionPair &pair);

/// Every Box element has integral age.
bool check_SL(const StackyFan &fan);

struct GenComparison {
  bool equal = false;
  std::vector<IntVec> only_in_gen;
  std::vector<IntVec> only_in_new_rays;
};
GenComparison check_gen_equals_new_rays(const ResolutionPair &pair);

/// Picard data of Z (no extension); its 𝕃* coordinates agree with those of X extended by
/// the new rays of Z because both come from the same generator matrix.
PicardLattices picard_of_resolution(const ResolutionPair &pair);

struct ExceptionalReport {
  bool all_outside = true;
  std::vector<bool> outside; ///< [D_{m+j}] ∉ 𝒦_Z, one entry per new ray
};
ExceptionalReport exceptional_not_in_kahler(const ResolutionPair &pair);

struct GlobalModuliFan {
  std::size_t rank = 0;
  IntMatrix P;          ///< rows p_1..p_{r+e} in 𝕃* coordinates
  IntMatrix Q;          ///< rows q_1..q_{r+e}
  IntMatrix transition; ///< Q = transition · P, unimodular
  bool q_user_supplied = false;
  bool datasets_coincide = false; ///< a_i = b_i for i <= m + e
  RationalCone C_X, C_Z, intersection;
  RationalCone kahler_X; ///< θ(𝒦_X)
  RationalCone kahler_Z;
  FaceCertificate face_in_C_X, face_in_C_Z, kahler_X_face_of_kahler_Z;
  bool kahler_X_in_intersection = false;
  bool single_cone = false; ///< C_X = C_Z
};

/// Conditions on a candidate q basis (empty iff valid): q_a = p_a for a <= r, every q_a
/// in 𝒦_Z, and Q = T·P with T integral of determinant ±1.
std::vector<std::string> check_basis_q(const IntMatrix &P, const IntMatrix &Q, std::size_t r, const RationalCone &kahler_Z);

/// Fails (validation) unless the pair is crepant and X is SL; q is searched for unless
/// supplied (rows in 𝕃* coordinates).
GlobalModuliFan build_global_fan(const ResolutionPair &pair,
                                 const std::optional<std::vector<IntVec>> &q_override = std::nullopt);

} // namespace tlg
