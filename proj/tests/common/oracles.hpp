#pragma once

// Independent reference computations shared by the unit and acceptance tests. None of
// them call into the library's algorithms beyond basic containers and ring lookups.

#include "tlg/fan.hpp"
#include "tlg/polynomial.hpp"

#include <functional>
#include <map>
#include <tuple>

namespace oracle {

using tlg::Int;
using tlg::Rat;

/// |det| by cofactor expansion.
inline Int cofactor_det(const tlg::IntMatrix &M) {
  const std::size_t n = M.rows();
  if (n == 1)
    return M(0, 0);
  Int total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    tlg::IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j)
          minor(i - 1, cc++) = M(i, c);
    Int term = M(0, j) * cofactor_det(minor);
    total += (j % 2 == 0) ? term : Int(-term);
  }
  return total;
}

/// Σ over maximal cones of |det|.
inline Int determinant_sum(const tlg::StackyFan &f) {
  Int total = 0;
  for (std::size_t k = 0; k < f.max_cones().size(); ++k)
    total += abs(cofactor_det(f.cone_matrix(k)));
  return total;
}

/// Staircase by brute force: every monomial of total exponent <= max_total is reduced
/// to a class and the rank of the classes is counted degree by degree.
inline std::map<Rat, std::size_t> staircase_dims(const tlg::GradedQuotientRing &ring, int max_total) {
  const std::size_t n = ring.nvars();
  std::map<Rat, std::vector<tlg::RatVec>> by_degree;
  std::vector<int> e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      Rat deg = 0;
      for (std::size_t v = 0; v < n; ++v)
        deg += ring.variable_degrees()[v] * e[v];
      by_degree[deg].push_back(ring.to_class(tlg::Polynomial::monomial(ring.order(), e)));
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[i] = x;
      rec(i + 1, left - x);
    }
    e[i] = 0;
  };
  rec(0, max_total);
  std::map<Rat, std::size_t> dims;
  for (auto &[deg, vecs] : by_degree) {
    tlg::RatMatrix M(vecs.size(), ring.dim());
    for (std::size_t i = 0; i < vecs.size(); ++i)
      for (std::size_t j = 0; j < ring.dim(); ++j)
        M(i, j) = vecs[i][j];
    if (std::size_t r = tlg::rank(M))
      dims[deg] = r;
  }
  return dims;
}

/// Classical series for P^N in Q[h]/h^{N+1}:
///   exp(h log χ / z) Σ_d χ^d / Π_{k=1}^d (h + kz)^{N+1}.
/// Each h-coefficient is a single power of z, so the result is keyed by
/// (d, power of log χ, power of h) with z-power −d(N+1) − (power of h).
inline std::map<std::tuple<int, int, int>, Rat> projective_space_series(int N, int order) {
  std::map<std::tuple<int, int, int>, Rat> out;
  for (int d = 0; d <= order; ++d) {
    std::vector<Rat> hyper(N + 1, 0);
    hyper[0] = 1;
    for (int k = 1; k <= d; ++k)
      for (int rep = 0; rep <= N; ++rep) {
        // 1/(h + kz) = Σ_i (−1)^i h^i / (kz)^{i+1}
        std::vector<Rat> next(N + 1, 0);
        for (int a = 0; a <= N; ++a) {
          Rat term = hyper[a] / k;
          for (int i = 0; a + i <= N; ++i) {
            next[a + i] += term;
            term = -term / k;
          }
        }
        hyper = next;
      }
    Rat fact = 1;
    for (int j = 0; j <= N; ++j) {
      if (j > 0)
        fact *= j;
      for (int i = 0; i + j <= N; ++i)
        if (hyper[i] != 0)
          out[{d, j, i + j}] += hyper[i] / fact;
    }
  }
  return out;
}

/// Coefficient of χ^{2n+1} in the twisted coordinate of C²/Z₂:
/// Π_{k<n} ((2k+1)/2)² / (2n+1)!.
inline Rat half_integer_mirror_coefficient(int n) {
  Rat c = 1;
  for (int k = 0; k < n; ++k)
    c *= Rat(2 * k + 1, 2) * Rat(2 * k + 1, 2);
  for (int k = 2; k <= 2 * n + 1; ++k)
    c /= k;
  return c;
}

} // namespace oracle
