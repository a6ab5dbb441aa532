#include "tlg/crepant.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tlg {

std::vector<IntVec> ResolutionPair::new_rays() const {
  return std::vector<IntVec>(Z.rays().begin() + static_cast<std::ptrdiff_t>(m()), Z.rays().end());
}

ResolutionPair make_resolution_pair(StackyFan X, StackyFan Z) {
  require_valid(X);
  require_valid(Z);
  if (X.rank() != Z.rank())
    fail_validation("resolution: fans live in lattices of different rank");
  const std::size_t m = X.num_rays();
  if (Z.num_rays() < m)
    fail_validation("resolution: Z has fewer rays than X");
  for (std::size_t i = 0; i < m; ++i)
    if (Z.rays()[i] != X.rays()[i])
      fail_validation("resolution: ray " + std::to_string(i + 1) + " of Z differs from ray " + std::to_string(i + 1) +
                      " of X");
  for (std::size_t k = 0; k < Z.max_cones().size(); ++k) {
    Int det = Z.cone_determinant(k);
    if (det != 1 && det != -1)
      fail_validation("resolution: Z is not smooth (cone " + std::to_string(k + 1) + " has determinant " +
                      det.get_str() + ")");
  }
  // Refinement: the rays of every cone of Z lie in a common cone of X.
  for (std::size_t k = 0; k < Z.max_cones().size(); ++k) {
    bool inside = false;
    for (std::size_t c = 0; c < X.max_cones().size() && !inside; ++c) {
      inside = true;
      for (std::size_t i : Z.max_cones()[k]) {
        RatVec coords = X.coordinates_in(c, to_rat(Z.rays()[i]));
        if (std::any_of(coords.begin(), coords.end(), [](const Rat &q) { return q < 0; })) {
          inside = false;
          break;
        }
      }
    }
    if (!inside)
      fail_validation("resolution: cone " + std::to_string(k + 1) + " of Z is not contained in a cone of X");
  }
  return ResolutionPair{std::move(X), std::move(Z)};
}

CrepancyReport is_crepant(const ResolutionPair &pair) {
  CrepancyReport rep;
  for (const IntVec &b : pair.new_rays()) {
    ConeLocation loc = locate(pair.X, b);
    CrepancyWitness w{b, loc.cone, loc.coords, 0, 0};
    for (const Rat &q : loc.coords)
      w.degree += q;
    w.discrepancy = w.degree - 1;
    if (w.discrepancy != 0)
      rep.crepant = false;
    rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

bool check_SL(const StackyFan &fan) {
  for (const BoxElement &b : box_elements(fan))
    if (!is_integer(b.age))
      return false;
  return true;
}

GenComparison check_gen_equals_new_rays(const ResolutionPair &pair) {
  std::set<IntVec> gen, rays;
  for (const BoxElement &b : gen_elements(pair.X))
    gen.insert(b.v);
  for (const IntVec &v : pair.new_rays())
    rays.insert(v);
  GenComparison out;
  std::set_difference(gen.begin(), gen.end(), rays.begin(), rays.end(), std::back_inserter(out.only_in_gen));
  std::set_difference(rays.begin(), rays.end(), gen.begin(), gen.end(), std::back_inserter(out.only_in_new_rays));
  out.equal = out.only_in_gen.empty() && out.only_in_new_rays.empty();
  return out;
}

PicardLattices picard_of_resolution(const ResolutionPair &pair) {
  auto extZ = std::make_shared<const ExtendedStackyFan>(pair.Z, std::vector<IntVec>{});
  return extended_pl_and_pic(extZ);
}

ExceptionalReport exceptional_not_in_kahler(const ResolutionPair &pair) {
  PicardLattices picZ = picard_of_resolution(pair);
  ExceptionalReport rep;
  for (std::size_t j = pair.m(); j < pair.Z.num_rays(); ++j) {
    bool outside = !cone_contains(picZ.kahler, to_rat(picZ.divisor_classes[j]));
    rep.outside.push_back(outside);
    rep.all_outside = rep.all_outside && outside;
  }
  return rep;
}

std::vector<std::string> check_basis_q(const IntMatrix &P, const IntMatrix &Q, std::size_t r,
                                       const RationalCone &kahler_Z) {
  std::vector<std::string> problems;
  const std::size_t k = P.rows();
  if (Q.rows() != k || Q.cols() != P.cols()) {
    problems.push_back("q basis has the wrong shape");
    return problems;
  }
  for (std::size_t a = 0; a < r; ++a)
    if (Q.row(a) != P.row(a))
      problems.push_back("q_" + std::to_string(a + 1) + " differs from p_" + std::to_string(a + 1));
  for (std::size_t a = 0; a < k; ++a)
    if (!cone_contains(kahler_Z, to_rat(Q.row(a))))
      problems.push_back("q_" + std::to_string(a + 1) + " is not in the Kähler cone of Z");
  auto Pinv = inverse(to_rat(P));
  if (!Pinv) {
    problems.push_back("p basis is singular");
    return problems;
  }
  RatMatrix T = to_rat(Q) * *Pinv;
  bool integral = true;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      integral = integral && is_integer(T(i, j));
  if (!integral)
    problems.push_back("q basis is not contained in the extended Picard lattice");
  else {
    Rat det = determinant(T);
    if (det != 1 && det != -1)
      problems.push_back("q basis does not generate the extended Picard lattice (index " + det.get_str() + ")");
  }
  return problems;
}

namespace {

/// Integer vectors with entries in [−B, B] and total |c| >= 1, by L1 norm then lexicographic.
std::vector<IntVec> small_vectors(std::size_t k, long B) {
  std::vector<IntVec> out;
  IntVec cur(k, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == k) {
      if (!is_zero(cur))
        out.push_back(cur);
      return;
    }
    for (long x = -B; x <= B; ++x) {
      cur[a] = x;
      rec(a + 1);
    }
  };
  rec(0);
  auto l1 = [](const IntVec &v) {
    Int s = 0;
    for (const Int &x : v)
      s += abs(x);
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const IntVec &x, const IntVec &y) {
    Int a = l1(x), b = l1(y);
    return a != b ? a < b : x < y;
  });
  return out;
}

/// q_{r+1..r+e} = Σ_a c_a p_a with q ∈ 𝒦_Z and the lower-right e × e block of the
/// transition matrix unimodular.
std::optional<IntMatrix> search_q(const IntMatrix &P, std::size_t r, const RationalCone &kahler_Z) {
  const std::size_t k = P.rows(), e = k - r;
  if (e == 0)
    return P;
  for (long B : {1L, 2L, 3L}) {
    std::vector<IntVec> cands;
    for (const IntVec &c : small_vectors(k, B)) {
      IntVec q(P.cols(), 0);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t j = 0; j < P.cols(); ++j)
          q[j] += c[a] * P(a, j);
      if (cone_contains(kahler_Z, to_rat(q)))
        cands.push_back(c);
      if (cands.size() >= 64)
        break;
    }
    std::vector<std::size_t> pick;
    std::optional<IntMatrix> found;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (found)
        return;
      if (pick.size() == e) {
        IntMatrix block(e, e);
        for (std::size_t i = 0; i < e; ++i)
          for (std::size_t j = 0; j < e; ++j)
            block(i, j) = cands[pick[i]][r + j];
        Int det = determinant(block);
        if (det != 1 && det != -1)
          return;
        IntMatrix T = IntMatrix::identity(k);
        for (std::size_t i = 0; i < e; ++i)
          for (std::size_t a = 0; a < k; ++a)
            T(r + i, a) = cands[pick[i]][a];
        found = T * P;
        return;
      }
      for (std::size_t i = start; i < cands.size(); ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
    if (found)
      return found;
  }
  return std::nullopt;
}

} // namespace

GlobalModuliFan build_global_fan(const ResolutionPair &pair, const std::optional<std::vector<IntVec>> &q_override) {
  CrepancyReport crep = is_crepant(pair);
  if (!crep.crepant)
    fail_validation("global moduli fan: the resolution is not crepant");
  if (!check_SL(pair.X))
    fail_validation("global moduli fan: X is not an SL orbifold");

  auto extX = std::make_shared<const ExtendedStackyFan>(pair.X, pair.new_rays());
  PicardLattices picX = extended_pl_and_pic(extX);
  auto pd = choose_basis_p(picX);
  PicardLattices picZ = picard_of_resolution(pair);
  if (!(picZ.ext->T() == extX->T()))
    fail_invariant("global moduli fan: lattice coordinates of X and Z disagree");

  GlobalModuliFan g;
  g.rank = picX.k;
  g.P = pd.P;
  g.datasets_coincide = extX->generators() == pair.Z.rays();
  g.kahler_Z = picZ.kahler;
  g.kahler_X = picX.kahler;
  const std::size_t r = extX->r();
  if (q_override) {
    g.Q = IntMatrix::from_rows(*q_override, picX.k);
    g.q_user_supplied = true;
  } else {
    auto Q = search_q(g.P, r, picZ.kahler);
    if (!Q)
      fail_validation("global moduli fan: no q basis found within the search bound; supply one with --q-basis");
    g.Q = *Q;
  }
  auto problems = check_basis_q(g.P, g.Q, r, picZ.kahler);
  if (!problems.empty()) {
    std::string msg = "global moduli fan: invalid q basis:";
    for (const std::string &p : problems)
      msg += " " + p + ";";
    fail_validation(msg);
  }
  RatMatrix T = to_rat(g.Q) * *inverse(to_rat(g.P));
  g.transition = to_int(T);

  g.C_X = RationalCone::from_generators(g.rank, to_rat(g.P).row_list());
  g.C_Z = RationalCone::from_generators(g.rank, to_rat(g.Q).row_list());
  g.intersection = intersect(g.C_X, g.C_Z);
  g.face_in_C_X = face_certificate(g.intersection, g.C_X);
  g.face_in_C_Z = face_certificate(g.intersection, g.C_Z);
  if (!g.face_in_C_X.is_face || !g.face_in_C_Z.is_face)
    fail_invariant("global moduli fan: C_X ∩ C_Z is not a common face");
  g.kahler_X_in_intersection = true;
  for (const RatVec &v : cone_generators(g.kahler_X))
    g.kahler_X_in_intersection = g.kahler_X_in_intersection && cone_contains(g.intersection, v);
  g.kahler_X_face_of_kahler_Z = face_certificate(g.kahler_X, g.kahler_Z);
  g.single_cone = cone_contains(g.C_X, to_rat(g.Q.row(0))) && cone_dimension(g.intersection) == g.rank;
  return g;
}

} // namespace tlg
