#include "tlg/linalg.hpp"

#include <algorithm>

namespace tlg {

RatMatrix to_rat(const IntMatrix &m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = m(i, j);
  return r;
}

IntMatrix to_int(const RatMatrix &m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integer(m(i, j)))
        throw std::logic_error("to_int: non-integral matrix entry");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

IntVec SNFDecomposition::invariant_factors() const {
  IntVec out;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (S(i, i) != 0)
      out.push_back(S(i, i));
  return out;
}

namespace {

// Elementary operations applied simultaneously to the working matrix and U or V.
void row_addmul(IntMatrix &A, IntMatrix &U, std::size_t dst, std::size_t src, const Int &q) {
  for (std::size_t j = 0; j < A.cols(); ++j)
    A(dst, j) -= q * A(src, j);
  for (std::size_t j = 0; j < U.cols(); ++j)
    U(dst, j) -= q * U(src, j);
}

void col_addmul(IntMatrix &A, IntMatrix &V, std::size_t dst, std::size_t src, const Int &q) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    A(i, dst) -= q * A(i, src);
  for (std::size_t i = 0; i < V.rows(); ++i)
    V(i, dst) -= q * V(i, src);
}

} // namespace

SNFDecomposition smith_normal_form(const IntMatrix &M) {
  const std::size_t r = M.rows(), c = M.cols();
  IntMatrix A = M, U = IntMatrix::identity(r), V = IntMatrix::identity(c);
  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    bool found_any = true;
    for (;;) {
      std::size_t pi = r, pj = c;
      Int best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (A(i, j) != 0 && (pi == r || abs(A(i, j)) < best)) {
            best = abs(A(i, j));
            pi = i;
            pj = j;
          }
      if (pi == r) {
        found_any = false;
        break;
      }
      A.swap_rows(t, pi);
      U.swap_rows(t, pi);
      A.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (A(i, t) == 0)
          continue;
        Int q = A(i, t) / A(t, t); // truncating division: |remainder| < |pivot|
        row_addmul(A, U, i, t, q);
        if (A(i, t) != 0)
          clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (A(t, j) == 0)
          continue;
        Int q = A(t, j) / A(t, t);
        col_addmul(A, V, j, t, q);
        if (A(t, j) != 0)
          clean = false;
      }
      if (!clean)
        continue;

      bool divisible = true;
      for (std::size_t i = t + 1; i < r && divisible; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (A(i, j) % A(t, t) != 0) {
            row_addmul(A, U, t, i, Int(-1));
            divisible = false;
            break;
          }
      if (divisible)
        break;
    }
    if (!found_any)
      break;
    if (A(t, t) < 0) {
      for (std::size_t j = 0; j < c; ++j)
        A(t, j) = -A(t, j);
      for (std::size_t j = 0; j < r; ++j)
        U(t, j) = -U(t, j);
    }
  }
  return {U, A, V};
}

std::vector<IntVec> hermite_basis(const std::vector<IntVec> &vectors, std::size_t dim) {
  std::vector<IntVec> rows;
  for (const IntVec &v : vectors) {
    if (v.size() != dim)
      throw std::invalid_argument("hermite_basis: vector of wrong length");
    if (!is_zero(v))
      rows.push_back(v);
  }
  std::size_t p = 0;
  for (std::size_t col = 0; col < dim && p < rows.size(); ++col) {
    // Euclid on column `col` among rows p..end.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = p; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])))
          best = i;
      if (best == rows.size())
        break;
      std::swap(rows[p], rows[best]);
      bool done = true;
      for (std::size_t i = p + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0)
          continue;
        Int q = rows[i][col] / rows[p][col];
        for (std::size_t j = 0; j < dim; ++j)
          rows[i][j] -= q * rows[p][j];
        if (rows[i][col] != 0)
          done = false;
      }
      if (done)
        break;
    }
    if (rows[p][col] == 0)
      continue;
    if (rows[p][col] < 0)
      for (Int &x : rows[p])
        x = -x;
    for (std::size_t i = 0; i < p; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[p][col].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < dim; ++j)
          rows[i][j] -= q * rows[p][j];
    }
    ++p;
  }
  rows.resize(p);
  return rows;
}

std::vector<IntVec> kernel_basis(const IntMatrix &M) {
  const std::size_t n = M.cols();
  if (M.rows() == 0) {
    std::vector<IntVec> id;
    for (std::size_t i = 0; i < n; ++i) {
      IntVec e(n, 0);
      e[i] = 1;
      id.push_back(e);
    }
    return id;
  }
  SNFDecomposition snf = smith_normal_form(M);
  std::size_t k = snf.invariant_factors().size();
  std::vector<IntVec> ker;
  for (std::size_t j = k; j < n; ++j)
    ker.push_back(snf.V.col(j));
  return hermite_basis(ker, n);
}

std::vector<IntVec> saturate(const std::vector<IntVec> &vectors, std::size_t dim) {
  std::vector<IntVec> nz;
  for (const IntVec &v : vectors)
    if (!is_zero(v))
      nz.push_back(v);
  if (nz.empty())
    return {};
  std::vector<IntVec> perp = kernel_basis(IntMatrix::from_rows(nz, dim));
  if (perp.empty())
    return kernel_basis(IntMatrix(0, dim));
  return kernel_basis(IntMatrix::from_rows(perp, dim));
}

IntVec cokernel_factors(const IntMatrix &A) {
  SNFDecomposition snf = smith_normal_form(A);
  IntVec out;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Int f = i < A.cols() ? snf.S(i, i) : Int(0);
    if (f != 1)
      out.push_back(f);
  }
  return out;
}

Splitting splitting_maps(const IntMatrix &A) {
  const std::size_t d = A.rows(), n = A.cols();
  SNFDecomposition snf = smith_normal_form(A);
  IntVec bad;
  for (std::size_t i = 0; i < d; ++i) {
    Int f = i < n ? snf.S(i, i) : Int(0);
    if (f != 1)
      bad.push_back(f);
  }
  if (!bad.empty()) {
    std::string msg = "lattice map is not surjective; cokernel invariant factors:";
    for (const Int &f : bad)
      msg += " " + f.get_str();
    fail_validation(msg);
  }
  std::vector<IntVec> ker = kernel_basis(A);
  const std::size_t k = ker.size();

  IntMatrix g(n, d);
  IntMatrix g0 = snf.V.select_cols([&] {
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i)
      idx[i] = i;
    return idx;
  }()) * snf.U;
  for (std::size_t c = 0; c < d; ++c) {
    IntVec x = g0.col(c);
    for (const IntVec &h : ker) {
      std::size_t piv = 0;
      while (h[piv] == 0)
        ++piv;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), x[piv].get_mpz_t(), h[piv].get_mpz_t());
      for (std::size_t j = 0; j < n; ++j)
        x[j] -= q * h[j];
    }
    for (std::size_t j = 0; j < n; ++j)
      g(j, c) = x[j];
  }

  IntMatrix t = IntMatrix::from_cols(ker, n);
  if (k == 0)
    t = IntMatrix(n, 0);
  IntMatrix tg(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      tg(i, j) = t(i, j);
    for (std::size_t j = 0; j < d; ++j)
      tg(i, k + j) = g(i, j);
  }
  auto inv = inverse(to_rat(tg));
  if (!inv)
    fail_invariant("splitting_maps: [t|g] is singular");
  IntMatrix full = to_int(*inv);
  IntMatrix s(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s(i, j) = full(i, j);
  return {t, s, g};
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix &m) {
  std::vector<std::size_t> pivots;
  std::size_t p = 0;
  for (std::size_t col = 0; col < m.cols() && p < m.rows(); ++col) {
    std::size_t sel = m.rows();
    for (std::size_t i = p; i < m.rows(); ++i)
      if (m(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel == m.rows())
      continue;
    m.swap_rows(p, sel);
    Rat inv = 1 / m(p, col);
    for (std::size_t j = 0; j < m.cols(); ++j)
      m(p, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == p || m(i, col) == 0)
        continue;
      Rat f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) -= f * m(p, j);
    }
    pivots.push_back(col);
    ++p;
  }
  return pivots;
}

} // namespace

Rat determinant(RatMatrix m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("determinant: non-square matrix");
  const std::size_t n = m.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = n;
    for (std::size_t i = c; i < n; ++i)
      if (m(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel == n)
      return 0;
    if (sel != c) {
      m.swap_rows(sel, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0)
        continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j)
        m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

Int determinant(const IntMatrix &m) { return determinant(to_rat(m)).get_num(); }

std::size_t rank(RatMatrix m) { return rref(m).size(); }

std::optional<RatMatrix> inverse(const RatMatrix &m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("inverse: non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv.back() >= n)
    return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inv(i, j) = aug(i, n + j);
  return inv;
}

std::optional<RatVec> solve(const RatMatrix &M, const RatVec &b) {
  if (M.rows() != b.size())
    throw std::invalid_argument("solve: dimension mismatch");
  RatMatrix aug(M.rows(), M.cols() + 1);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (std::size_t j = 0; j < M.cols(); ++j)
      aug(i, j) = M(i, j);
    aug(i, M.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == M.cols())
    return std::nullopt;
  RatVec x(M.cols());
  for (std::size_t i = 0; i < piv.size(); ++i)
    x[piv[i]] = aug(i, M.cols());
  return x;
}

std::vector<RatVec> nullspace(RatMatrix M) {
  auto piv = rref(M);
  std::vector<bool> is_piv(M.cols(), false);
  for (std::size_t c : piv)
    is_piv[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t f = 0; f < M.cols(); ++f) {
    if (is_piv[f])
      continue;
    RatVec v(M.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i)
      v[piv[i]] = -M(i, f);
    basis.push_back(v);
  }
  return basis;
}

Int normalized_simplex_volume(const std::vector<IntVec> &vectors) {
  if (vectors.empty())
    return 1;
  const std::size_t d = vectors.front().size();
  if (vectors.size() != d)
    throw std::invalid_argument("normalized_simplex_volume: need exactly d vectors in dimension d");
  return abs(determinant(IntMatrix::from_cols(vectors, d)));
}

IntVec primitive_integer_multiple(const RatVec &v) {
  Int den = 1;
  for (const Rat &q : v)
    den = lcm_int(den, q.get_den());
  IntVec out;
  for (const Rat &q : v)
    out.push_back(Rat(q * den).get_num());
  Int g = vec_gcd(out);
  if (g > 1)
    for (Int &x : out)
      x /= g;
  return out;
}

} // namespace tlg
