#include "tlg/cone.hpp"

#include <algorithm>
#include <set>

namespace tlg {

namespace {

struct Tableau {
  RatMatrix T;
  RatVec b;
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c) {
    Rat inv = 1 / T(r, c);
    for (std::size_t j = 0; j < T.cols(); ++j)
      T(r, j) *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < T.rows(); ++i) {
      if (i == r || T(i, c) == 0)
        continue;
      Rat f = T(i, c);
      for (std::size_t j = 0; j < T.cols(); ++j)
        T(i, j) -= f * T(r, j);
      b[i] -= f * b[r];
    }
    basis[r] = c;
  }

  // Minimizes cost over columns [0, allowed); returns false when unbounded.
  bool run(const RatVec &cost, std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed && enter == allowed; ++j) {
        if (std::find(basis.begin(), basis.end(), j) != basis.end())
          continue;
        Rat red = cost[j];
        for (std::size_t i = 0; i < T.rows(); ++i)
          red -= cost[basis[i]] * T(i, j);
        if (red < 0)
          enter = j;
      }
      if (enter == allowed)
        return true;
      std::size_t leave = T.rows();
      Rat best;
      for (std::size_t i = 0; i < T.rows(); ++i) {
        if (T(i, enter) <= 0)
          continue;
        Rat ratio = b[i] / T(i, enter);
        if (leave == T.rows() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == T.rows())
        return false;
      pivot(leave, enter);
    }
  }
};

} // namespace

LPResult solve_lp(const LinearProgram &lp) {
  // Standard form columns: split free variables, then one slack per inequality.
  std::vector<std::size_t> pos(lp.num_vars), neg(lp.num_vars, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t v = 0; v < lp.num_vars; ++v) {
    pos[v] = ncols++;
    if (lp.free_var[v])
      neg[v] = ncols++;
  }
  std::vector<std::size_t> slack(lp.rows.size(), SIZE_MAX);
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    if (lp.rows[i].rel != Relation::Equal)
      slack[i] = ncols++;
  const std::size_t m = lp.rows.size(), structural = ncols;

  Tableau tab{RatMatrix(m, structural + m), RatVec(m), std::vector<std::size_t>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    const auto &row = lp.rows[i];
    if (row.coef.size() != lp.num_vars)
      throw std::invalid_argument("solve_lp: row length mismatch");
    for (std::size_t v = 0; v < lp.num_vars; ++v) {
      tab.T(i, pos[v]) = row.coef[v];
      if (neg[v] != SIZE_MAX)
        tab.T(i, neg[v]) = -row.coef[v];
    }
    if (row.rel == Relation::GreaterEq)
      tab.T(i, slack[i]) = -1;
    else if (row.rel == Relation::LessEq)
      tab.T(i, slack[i]) = 1;
    tab.b[i] = row.rhs;
    if (tab.b[i] < 0) {
      for (std::size_t j = 0; j < structural; ++j)
        tab.T(i, j) = -tab.T(i, j);
      tab.b[i] = -tab.b[i];
    }
    tab.T(i, structural + i) = 1;
    tab.basis[i] = structural + i;
  }

  RatVec phase1(structural + m, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    phase1[structural + i] = 1;
  tab.run(phase1, structural + m);
  Rat infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] >= structural)
      infeas += tab.b[i];
  if (infeas != 0)
    return {LPResult::Status::Infeasible, {}, 0};

  // Drive remaining (zero-valued) artificials out of the basis.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < structural)
      continue;
    for (std::size_t j = 0; j < structural; ++j)
      if (tab.T(i, j) != 0) {
        tab.pivot(i, j);
        break;
      }
  }

  RatVec cost(structural + m, Rat(0));
  for (std::size_t v = 0; v < lp.objective.size(); ++v) {
    cost[pos[v]] = lp.objective[v];
    if (neg[v] != SIZE_MAX)
      cost[neg[v]] = -lp.objective[v];
  }
  bool bounded = lp.objective.empty() ? true : tab.run(cost, structural);

  RatVec col(structural + m, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    col[tab.basis[i]] = tab.b[i];
  RatVec x(lp.num_vars);
  Rat value = 0;
  for (std::size_t v = 0; v < lp.num_vars; ++v) {
    x[v] = col[pos[v]] - (neg[v] != SIZE_MAX ? col[neg[v]] : Rat(0));
    if (v < lp.objective.size())
      value += lp.objective[v] * x[v];
  }
  return {bounded ? LPResult::Status::Optimal : LPResult::Status::Unbounded, x, value};
}

RationalCone RationalCone::from_generators(std::size_t dim, std::vector<RatVec> gens) {
  for (const RatVec &g : gens)
    if (g.size() != dim)
      throw std::invalid_argument("RationalCone: generator of wrong dimension");
  RationalCone c;
  c.dim = dim;
  c.generators = std::move(gens);
  return c;
}

RationalCone RationalCone::from_inequalities(std::size_t dim, std::vector<RatVec> ineq, std::vector<RatVec> eq) {
  for (const RatVec &a : ineq)
    if (a.size() != dim)
      throw std::invalid_argument("RationalCone: inequality of wrong dimension");
  for (const RatVec &a : eq)
    if (a.size() != dim)
      throw std::invalid_argument("RationalCone: equation of wrong dimension");
  RationalCone c;
  c.dim = dim;
  c.has_h = true;
  c.inequalities = std::move(ineq);
  c.equations = std::move(eq);
  return c;
}

bool cone_contains(const RationalCone &C, const RatVec &x) {
  if (x.size() != C.dim)
    throw std::invalid_argument("cone_contains: dimension mismatch");
  if (C.has_h) {
    for (const RatVec &a : C.equations)
      if (dot(a, x) != 0)
        return false;
    for (const RatVec &a : C.inequalities)
      if (dot(a, x) < 0)
        return false;
    return true;
  }
  LinearProgram lp(C.generators.size());
  for (std::size_t k = 0; k < C.dim; ++k) {
    RatVec row(C.generators.size());
    for (std::size_t j = 0; j < C.generators.size(); ++j)
      row[j] = C.generators[j][k];
    lp.add(row, Relation::Equal, x[k]);
  }
  return solve_lp(lp).feasible();
}

std::vector<IntVec> extreme_rays(const RationalCone &C) {
  if (!C.has_h)
    throw std::invalid_argument("extreme_rays: H-description required");
  const std::size_t n = C.dim;
  auto solution_space = [&](const std::vector<std::size_t> &tight) {
    std::vector<RatVec> rows = C.equations;
    for (std::size_t i : tight)
      rows.push_back(C.inequalities[i]);
    if (rows.empty()) {
      std::vector<RatVec> id;
      for (std::size_t i = 0; i < n; ++i) {
        RatVec e(n);
        e[i] = 1;
        id.push_back(e);
      }
      return id;
    }
    return nullspace(RatMatrix::from_rows(rows, n));
  };
  std::vector<std::size_t> all(C.inequalities.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;
  if (!solution_space(all).empty())
    fail_invariant("extreme_rays: cone is not pointed");
  const std::size_t span = solution_space({}).size();
  if (span == 0)
    return {};

  std::set<IntVec> rays;
  const std::size_t k = span - 1, h = C.inequalities.size();
  std::vector<bool> pick(h, false);
  std::fill(pick.begin(), pick.begin() + std::min(k, h), true);
  if (k > h)
    return {};
  do {
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < h; ++i)
      if (pick[i])
        tight.push_back(i);
    auto sol = solution_space(tight);
    if (sol.size() != 1)
      continue;
    for (int sign : {1, -1}) {
      RatVec v = sol[0];
      for (Rat &x : v)
        x *= sign;
      bool ok = true;
      for (const RatVec &a : C.inequalities)
        if (dot(a, v) < 0) {
          ok = false;
          break;
        }
      if (ok)
        rays.insert(primitive_integer_multiple(v));
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return {rays.begin(), rays.end()};
}

std::vector<RatVec> cone_generators(const RationalCone &C) {
  if (!C.generators.empty() || !C.has_h)
    return C.generators;
  std::vector<RatVec> out;
  for (const IntVec &r : extreme_rays(C))
    out.push_back(to_rat(r));
  return out;
}

RationalCone with_h_description(const RationalCone &C) {
  if (C.has_h)
    return C;
  const std::size_t n = C.dim;
  RationalCone out = C;
  out.has_h = true;
  if (C.generators.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      RatVec e(n);
      e[i] = 1;
      out.equations.push_back(e);
    }
    return out;
  }
  out.equations = nullspace(RatMatrix::from_rows(C.generators, n));
  const std::size_t span = n - out.equations.size();
  std::set<IntVec> facets;
  if (span == 1) {
    // A ray: one inequality picks the side.
    RatVec g = C.generators.front();
    for (const RatVec &x : C.generators)
      if (!is_zero(x)) {
        g = x;
        break;
      }
    facets.insert(primitive_integer_multiple(g));
  } else {
    const std::size_t k = span - 1, h = C.generators.size();
    if (k <= h) {
      std::vector<bool> pick(h, false);
      std::fill(pick.begin(), pick.begin() + k, true);
      do {
        std::vector<RatVec> rows = out.equations;
        for (std::size_t i = 0; i < h; ++i)
          if (pick[i])
            rows.push_back(C.generators[i]);
        auto sol = nullspace(RatMatrix::from_rows(rows, n));
        if (sol.size() != 1)
          continue;
        for (int sign : {1, -1}) {
          RatVec a = sol[0];
          for (Rat &x : a)
            x *= sign;
          bool ok = true;
          for (const RatVec &g : C.generators)
            if (dot(a, g) < 0) {
              ok = false;
              break;
            }
          if (ok)
            facets.insert(primitive_integer_multiple(a));
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  for (const IntVec &a : facets)
    out.inequalities.push_back(to_rat(a));
  return out;
}

RationalCone intersect(const RationalCone &A, const RationalCone &B) {
  if (A.dim != B.dim)
    throw std::invalid_argument("intersect: dimension mismatch");
  RationalCone ha = with_h_description(A), hb = with_h_description(B);
  std::vector<RatVec> ineq = ha.inequalities, eq = ha.equations;
  ineq.insert(ineq.end(), hb.inequalities.begin(), hb.inequalities.end());
  eq.insert(eq.end(), hb.equations.begin(), hb.equations.end());
  RationalCone out = RationalCone::from_inequalities(A.dim, ineq, eq);
  for (const IntVec &r : extreme_rays(out))
    out.generators.push_back(to_rat(r));
  return out;
}

std::size_t cone_dimension(const RationalCone &C) {
  auto gens = cone_generators(C);
  if (gens.empty())
    return 0;
  return rank(RatMatrix::from_rows(gens, C.dim));
}

FaceCertificate face_certificate(const RationalCone &F, const RationalCone &C) {
  if (F.dim != C.dim)
    throw std::invalid_argument("is_face: dimension mismatch");
  auto fg = cone_generators(F), cg = cone_generators(C);
  for (const RatVec &g : fg)
    if (!cone_contains(C, g))
      fail_validation("is_face: F is not contained in C");
  RationalCone Fv = RationalCone::from_generators(F.dim, fg);
  LinearProgram lp(C.dim);
  lp.free_var.assign(C.dim, true);
  for (const RatVec &f : fg)
    lp.add(f, Relation::Equal, 0);
  for (const RatVec &g : cg)
    lp.add(g, cone_contains(Fv, g) ? Relation::Equal : Relation::GreaterEq, cone_contains(Fv, g) ? 0 : 1);
  LPResult res = solve_lp(lp);
  if (!res.feasible())
    return {false, {}};
  return {true, res.x};
}

} // namespace tlg
