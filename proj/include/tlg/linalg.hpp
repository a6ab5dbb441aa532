#pragma once

#include "tlg/arith.hpp"

#include <optional>
#include <vector>

namespace tlg {

/// Dense row-major matrix over Int or Rat.
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }
  /// Rows given as vectors; all rows must have length `cols`.
  static Matrix from_rows(const std::vector<std::vector<T>> &rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw std::invalid_argument("Matrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < cols; ++j)
        m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_cols(const std::vector<std::vector<T>> &cols, std::size_t rows) {
    return from_rows(cols, rows).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      c[i] = (*this)(i, j);
    return c;
  }
  std::vector<std::vector<T>> row_list() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i)
      out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix &o) const {
    if (cols_ != o.rows_)
      throw std::invalid_argument("Matrix product: dimension mismatch");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T &a = (*this)(i, k);
        if (a == 0)
          continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          p(i, j) += a * o(k, j);
      }
    return p;
  }
  std::vector<T> operator*(const std::vector<T> &v) const {
    if (cols_ != v.size())
      throw std::invalid_argument("Matrix-vector product: dimension mismatch");
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        out[i] += (*this)(i, j) * v[j];
    return out;
  }
  Matrix operator-(const Matrix &o) const {
    Matrix p = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
      p.data_[i] -= o.data_[i];
    return p;
  }
  bool operator==(const Matrix &o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  /// Submatrix on the given columns.
  Matrix select_cols(const std::vector<std::size_t> &idx) const {
    Matrix s(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        s(i, j) = (*this)(i, idx[j]);
    return s;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i)
      std::swap((*this)(i, a), (*this)(i, b));
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

RatMatrix to_rat(const IntMatrix &m);
/// Requires integral entries.
IntMatrix to_int(const RatMatrix &m);

struct SNFDecomposition {
  IntMatrix U, S, V;
  /// Nonzero diagonal entries of S in order.
  IntVec invariant_factors() const;
};

/// U·M·V = S with S diagonal, d_1 | d_2 | ..., d_i >= 0.
/// Pivot: smallest nonzero |entry| of the active block, ties by row then column.
SNFDecomposition smith_normal_form(const IntMatrix &M);

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// echelon rows, positive pivots, entries above pivots reduced into [0, pivot).
/// Zero rows dropped. Unique for the lattice, hence a canonical basis.
std::vector<IntVec> hermite_basis(const std::vector<IntVec> &vectors, std::size_t dim);

/// ℤ-basis of {x : M x = 0}, in Hermite form.
std::vector<IntVec> kernel_basis(const IntMatrix &M);

/// ℤ-basis of (ℚ-span ∩ ℤ^dim).
std::vector<IntVec> saturate(const std::vector<IntVec> &vectors, std::size_t dim);

struct Splitting {
  IntMatrix t; ///< n × k, columns are the 𝕃 basis.
  IntMatrix s; ///< k × n, s·t = id, s·g = 0.
  IntMatrix g; ///< n × d, A·g = id.
};

/// For surjective A (d × n). Fails with the cokernel invariant factors otherwise.
/// g is the SNF right inverse with each column reduced modulo ker A against the
/// Hermite basis (pivot coordinates brought into [0, pivot)), so it is independent of
/// the SNF path.
Splitting splitting_maps(const IntMatrix &A);

/// Invariant factors of coker(A) other than 1 (empty iff A is surjective); rank deficit
/// shows up as zero factors.
IntVec cokernel_factors(const IntMatrix &A);

Rat determinant(RatMatrix m);
Int determinant(const IntMatrix &m);
std::size_t rank(RatMatrix m);
inline std::size_t rank(const IntMatrix &m) { return rank(to_rat(m)); }
std::optional<RatMatrix> inverse(const RatMatrix &m);
/// Some solution x of M x = b, or nullopt.
std::optional<RatVec> solve(const RatMatrix &M, const RatVec &b);
/// Basis of the rational null space {x : M x = 0}.
std::vector<RatVec> nullspace(RatMatrix M);

/// |det| of d vectors in ℤ^d.
Int normalized_simplex_volume(const std::vector<IntVec> &vectors);

/// Clears denominators and divides by the content; zero stays zero.
IntVec primitive_integer_multiple(const RatVec &v);

} // namespace tlg
