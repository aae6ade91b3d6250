#pragma once

// Dense matrices over the field and exact Gaussian elimination.

#include <optional>
#include <string>
#include <vector>

#include "coxhodge/field.hpp"

namespace coxhodge {

using Vector = std::vector<FieldElement>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_columns(size_t rows, const std::vector<Vector>& cols) {
    Matrix m(rows, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
      for (size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  FieldElement& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const FieldElement& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  Vector column(size_t j) const {
    Vector v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vector row(size_t i) const { return Vector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  size_t nonzeros() const {
    size_t n = 0;
    for (const auto& x : a_) n += !x.is_zero();
    return n;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const FieldElement& x = a(i, k);
        if (x.is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          const FieldElement& y = b(k, j);
          if (!y.is_zero()) c(i, j) += x * y;
        }
      }
    return c;
  }

  friend Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols_ != v.size()) throw InvalidInput("matrix-vector product: dimension mismatch");
    Vector r(a.rows_);
    for (size_t k = 0; k < a.cols_; ++k) {
      if (v[k].is_zero()) continue;
      for (size_t i = 0; i < a.rows_; ++i)
        if (!a(i, k).is_zero()) r[i] += a(i, k) * v[k];
    }
    return r;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check_same(b);
    for (size_t i = 0; i < a.a_.size(); ++i)
      if (!b.a_[i].is_zero()) a.a_[i] += b.a_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check_same(b);
    for (size_t i = 0; i < a.a_.size(); ++i)
      if (!b.a_[i].is_zero()) a.a_[i] -= b.a_[i];
    return a;
  }

  friend Matrix operator-(Matrix a) {
    for (auto& x : a.a_) x = -x;
    return a;
  }
  friend Matrix operator*(const FieldElement& s, Matrix a) {
    if (s.is_one()) return a;
    for (auto& x : a.a_)
      if (!x.is_zero()) x = s * x;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  size_t hash() const {
    size_t h = rows_ * 31 + cols_;
    for (const auto& x : a_) h = h * 1000003 ^ x.hash();
    return h;
  }

  Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const {
    Matrix m(nr, nc);
    for (size_t i = 0; i < nr; ++i)
      for (size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  void set_block(size_t r0, size_t c0, const Matrix& m) {
    for (size_t i = 0; i < m.rows_; ++i)
      for (size_t j = 0; j < m.cols_; ++j) (*this)(r0 + i, c0 + j) = m(i, j);
  }

  static Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) throw InvalidInput("hstack: row mismatch");
    Matrix m(a.rows_, a.cols_ + b.cols_);
    m.set_block(0, 0, a);
    m.set_block(0, a.cols_, b);
    return m;
  }

  static Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_) throw InvalidInput("vstack: column mismatch");
    Matrix m(a.rows_ + b.rows_, a.cols_);
    m.set_block(0, 0, a);
    m.set_block(a.rows_, 0, b);
    return m;
  }

  std::string to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (size_t j = 0; j < cols_; ++j) {
        if (j) s += ", ";
        s += (*this)(i, j).to_string();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_same(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw InvalidInput("matrix sum: dimension mismatch");
  }

  size_t rows_ = 0, cols_ = 0;
  std::vector<FieldElement> a_;
};

inline Matrix power(const Matrix& m, unsigned k) {
  Matrix r = Matrix::identity(m.rows());
  for (unsigned i = 0; i < k; ++i) r = m * r;
  return r;
}

struct Echelon {
  Matrix reduced;               // reduced row echelon form
  std::vector<size_t> pivots;   // pivot column of each nonzero row
};

/// Reduced row echelon form.  Among candidate pivots, the one with the fewest
/// c-coefficients is taken to limit coefficient growth.
inline Echelon rref(Matrix m) {
  Echelon e;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t best = m.rows();
    for (size_t i = r; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      if (best == m.rows() || m(i, c).size() < m(best, c).size() ||
          (m(i, c).size() == 1 && m(i, c).is_one()))
        best = i;
      if (m(best, c).is_one()) break;
    }
    if (best == m.rows()) continue;
    if (best != r)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    FieldElement inv = m(r, c).inverse();
    for (size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) = m(r, j) * inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      FieldElement f = m(i, c);
      for (size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.reduced = std::move(m);
  return e;
}

inline size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  return rref(m).pivots.size();
}

/// Basis of {x : m x = 0}, as the columns of the result.
inline Matrix nullspace(const Matrix& m) {
  const size_t n = m.cols();
  if (m.rows() == 0) return Matrix::identity(n);
  Echelon e = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<size_t> free;
  for (size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix k(n, free.size());
  for (size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = 1;
    for (size_t r = 0; r < e.pivots.size(); ++r)
      if (!e.reduced(r, free[f]).is_zero()) k(e.pivots[r], f) = -e.reduced(r, free[f]);
  }
  return k;
}

/// Indices of a maximal independent subset of the columns (the pivot columns).
inline std::vector<size_t> independent_columns(const Matrix& m) {
  if (m.empty()) return {};
  return rref(m).pivots;
}

/// Basis of the column space, chosen among the columns of m.
inline Matrix column_space(const Matrix& m) {
  auto idx = independent_columns(m);
  Matrix b(m.rows(), idx.size());
  for (size_t j = 0; j < idx.size(); ++j)
    for (size_t i = 0; i < m.rows(); ++i) b(i, j) = m(i, idx[j]);
  return b;
}

/// Some X with a X = b, if one exists.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("solve: dimension mismatch");
  const size_t n = a.cols();
  if (a.rows() == 0) return Matrix(n, b.cols());
  Echelon e = rref(Matrix::hstack(a, b));
  Matrix x(n, b.cols());
  for (size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= n) return std::nullopt;
    for (size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, n + j);
  }
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  if (a.rows() == 0) return Matrix();
  if (rank(a) != a.rows()) return std::nullopt;
  return solve(a, Matrix::identity(a.rows()));
}

inline FieldElement determinant(Matrix m) {
  if (m.rows() != m.cols()) throw InvalidInput("determinant of a non-square matrix");
  const size_t n = m.rows();
  FieldElement det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = n;
    for (size_t i = c; i < n; ++i)
      if (!m(i, c).is_zero() && (p == n || m(i, c).size() < m(p, c).size())) p = i;
    if (p == n) return FieldElement();
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(c, j), m(p, j));
      det = -det;
    }
    det *= m(c, c);
    FieldElement inv = m(c, c).inverse();
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      FieldElement f = m(i, c) * inv;
      for (size_t j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Incrementally maintained span, for greedy selection of independent vectors.
class SpanBuilder {
 public:
  explicit SpanBuilder(size_t dim) : dim_(dim) {}

  size_t size() const { return rows_.size(); }
  size_t dim() const { return dim_; }

  /// Adds v if it is independent of the current span; returns whether it was.
  bool add(const Vector& v) {
    Vector r = reduce(v);
    size_t p = 0;
    while (p < dim_ && r[p].is_zero()) ++p;
    if (p == dim_) return false;
    FieldElement inv = r[p].inverse();
    for (auto& x : r)
      if (!x.is_zero()) x = x * inv;
    for (size_t k = 0; k < rows_.size(); ++k) {
      if (rows_[k][p].is_zero()) continue;
      FieldElement f = rows_[k][p];
      for (size_t j = 0; j < dim_; ++j)
        if (!r[j].is_zero()) rows_[k][j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

  bool contains(const Vector& v) const {
    Vector r = reduce(v);
    for (const auto& x : r)
      if (!x.is_zero()) return false;
    return true;
  }

 private:
  Vector reduce(Vector v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      const size_t p = pivots_[k];
      if (v[p].is_zero()) continue;
      FieldElement f = v[p];
      for (size_t j = 0; j < dim_; ++j)
        if (!rows_[k][j].is_zero()) v[j] -= f * rows_[k][j];
    }
    return v;
  }

  size_t dim_;
  std::vector<Vector> rows_;
  std::vector<size_t> pivots_;
};

}  // namespace coxhodge
