#pragma once

#include "tlg/linalg.hpp"

#include <string>
#include <vector>

namespace tlg {

using IndexSet = std::vector<std::size_t>; ///< sorted, 0-based

/// Complete simplicial fan with primitive ray generators in N = ℤ^d.
class StackyFan {
public:
  /// Stores the data as given; call validate() before relying on fan axioms.
  StackyFan(std::size_t rank, std::vector<IntVec> rays, std::vector<IndexSet> max_cones);

  std::size_t rank() const { return rank_; }
  std::size_t num_rays() const { return rays_.size(); }
  const std::vector<IntVec> &rays() const { return rays_; }
  const std::vector<IndexSet> &max_cones() const { return cones_; }
  /// d × d matrix whose columns are the rays of maximal cone k.
  IntMatrix cone_matrix(std::size_t k) const;
  Int cone_determinant(std::size_t k) const;

  /// True iff `rays` is a subset of some maximal cone.
  bool is_cone(const IndexSet &rays) const;
  /// Coordinates of x with respect to the rays of maximal cone k (rational, any sign).
  RatVec coordinates_in(std::size_t k, const RatVec &x) const;

private:
  std::size_t rank_;
  std::vector<IntVec> rays_;
  std::vector<IndexSet> cones_;
  std::vector<RatMatrix> inverses_; // empty entry when singular
};

struct ValidationReport {
  bool simplicial = true;
  bool complete = true;
  bool primitive = true;
  std::vector<std::string> failures;
  bool ok() const { return simplicial && complete && primitive; }
};

ValidationReport validate(const StackyFan &fan);
/// Throws a validation Error carrying every failure message.
void require_valid(const StackyFan &fan);

/// Minimal cone σ(c) containing c with the coefficients of c on its rays.
struct ConeLocation {
  IndexSet cone;
  RatVec coords;
  std::size_t max_cone = 0; ///< a maximal cone containing σ(c)
};
ConeLocation locate(const StackyFan &fan, const IntVec &c);
IndexSet minimal_cone(const StackyFan &fan, const IntVec &c);

struct BoxElement {
  IntVec v;
  IndexSet cone;
  RatVec coords; ///< aligned with `cone`, each in (0,1)
  Rat age;
};

/// Box(Σ), deduplicated and sorted lexicographically by vector.
std::vector<BoxElement> box_elements(const StackyFan &fan);
std::vector<BoxElement> gen_elements(const StackyFan &fan);

/// A wall between two adjacent maximal cones σ = τ ∪ {i}, σ' = τ ∪ {j}.
struct Wall {
  std::size_t cone_a, cone_b;
  std::size_t ray_a, ray_b; ///< the rays off the wall
  RatVec relation;          ///< e_j − Σ_{k∈σ} c_k e_k in ℚ^m, where a_j = Σ c_k a_k
};
std::vector<Wall> walls(const StackyFan &fan);

/// Convexity of the PL function with value 1 on every ray.
bool anticanonical_nef(const StackyFan &fan);

class ExtendedStackyFan {
public:
  /// Extends by Gen(Σ).
  explicit ExtendedStackyFan(StackyFan fan);
  /// Extends by the given generators (must be nonzero, primitive, distinct Box elements).
  ExtendedStackyFan(StackyFan fan, std::vector<IntVec> extra);

  const StackyFan &fan() const { return fan_; }
  std::size_t rank() const { return fan_.rank(); }
  std::size_t m() const { return fan_.num_rays(); }
  std::size_t e() const { return extra_.size(); }
  std::size_t n() const { return m() + e(); }
  /// r = n − d − e, the Picard rank of the coarse space.
  std::size_t r() const { return n() - rank() - e(); }
  const IntVec &generator(std::size_t i) const { return i < m() ? fan_.rays()[i] : extra_[i - m()]; }
  std::vector<IntVec> generators() const;
  const std::vector<IntVec> &extra() const { return extra_; }
  /// Box data of extended generator k (0-based within the extension).
  const BoxElement &extra_box(std::size_t k) const { return extra_box_[k]; }
  /// deg(a_i): 1 for rays, the age for extended generators.
  Rat degree(std::size_t i) const;

  const IntMatrix &A() const { return A_; }
  /// 𝕃 basis in Hermite form; T is n × (n − d) with these columns.
  const std::vector<IntVec> &lattice_basis() const { return L_; }
  const Splitting &splitting() const { return split_; }
  const IntMatrix &T() const { return split_.t; }

  /// Generator i (0-based, rays or extended) lies in maximal cone k.
  bool generator_in_cone(std::size_t i, std::size_t k) const;
  /// Some maximal cone contains all generators in `idx`.
  bool is_face_set(const IndexSet &idx) const;
  /// Generators lying in maximal cone k.
  IndexSet cone_generators(std::size_t k) const;

private:
  void build();

  StackyFan fan_;
  std::vector<IntVec> extra_;
  std::vector<BoxElement> extra_box_;
  IntMatrix A_;
  std::vector<IntVec> L_;
  Splitting split_;
};

/// (𝒜, 𝒜^e): 𝒜 over ray indices, sorted by size descending then lexicographically.
std::pair<std::vector<IndexSet>, std::vector<IndexSet>> anticones(const ExtendedStackyFan &ext);
/// Whether the index set (over all n generators) belongs to 𝒜^e.
bool in_extended_anticones(const ExtendedStackyFan &ext, const IndexSet &idx);
std::vector<IndexSet> generalized_primitive_collections(const ExtendedStackyFan &ext);
std::vector<IntVec> cone_relations(const ExtendedStackyFan &ext, std::size_t max_cone);

/// Distinguished rational relation l_k = e_{m+k} − Σ r_i e_i of extended generator k.
RatVec distinguished_relation(const ExtendedStackyFan &ext, std::size_t k);

} // namespace tlg
