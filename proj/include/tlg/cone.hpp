#pragma once

#include "tlg/linalg.hpp"

#include <optional>
#include <vector>

namespace tlg {

enum class Relation { GreaterEq, LessEq, Equal };

/// Linear program over ℚ. Variables are nonnegative unless marked free.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<bool> free_var;
  struct Row {
    RatVec coef;
    Relation rel;
    Rat rhs;
  };
  std::vector<Row> rows;
  RatVec objective; ///< minimized; empty means pure feasibility

  explicit LinearProgram(std::size_t n) : num_vars(n), free_var(n, false) {}
  void add(RatVec coef, Relation rel, Rat rhs) { rows.push_back({std::move(coef), rel, std::move(rhs)}); }
};

struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded } status;
  RatVec x;
  Rat value;
  bool feasible() const { return status != Status::Infeasible; }
};

/// Exact two-phase simplex with Bland's rule.
LPResult solve_lp(const LinearProgram &lp);

/// Polyhedral cone in ℚ^dim. Either description may be present; when both are,
/// they must describe the same cone.
struct RationalCone {
  std::size_t dim = 0;
  std::vector<RatVec> generators;
  bool has_h = false;
  std::vector<RatVec> inequalities; ///< a · x >= 0
  std::vector<RatVec> equations;    ///< a · x == 0

  static RationalCone from_generators(std::size_t dim, std::vector<RatVec> gens);
  static RationalCone from_inequalities(std::size_t dim, std::vector<RatVec> ineq, std::vector<RatVec> eq = {});
};

bool cone_contains(const RationalCone &C, const RatVec &x);

struct FaceCertificate {
  bool is_face = false;
  RatVec functional; ///< ℓ >= 0 on C, zero exactly on F (when is_face)
};

/// Fails (validation) if F ⊄ C.
FaceCertificate face_certificate(const RationalCone &F, const RationalCone &C);
inline bool is_face(const RationalCone &F, const RationalCone &C) { return face_certificate(F, C).is_face; }

/// Extreme rays of a pointed H-cone as primitive integer vectors, sorted.
/// Fails (invariant) when the cone contains a line.
std::vector<IntVec> extreme_rays(const RationalCone &C);
/// Generators, computing them from the H-description if needed.
std::vector<RatVec> cone_generators(const RationalCone &C);
/// H-description computed from generators if needed.
RationalCone with_h_description(const RationalCone &C);
RationalCone intersect(const RationalCone &A, const RationalCone &B);
std::size_t cone_dimension(const RationalCone &C);

} // namespace tlg
