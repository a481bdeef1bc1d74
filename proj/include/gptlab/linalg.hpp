#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gptlab/scalar.hpp"

namespace gptlab {

/// Coordinate vector in the ambient space V = R^{N+1}.
template <Field S>
using Vec = std::vector<S>;

/// Dense row-major matrix. Sizes here are tiny, so no expression templates.
template <Field S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  static Matrix from_rows(const std::vector<Vec<S>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vec<S>>& cols) { return from_rows(cols).transpose(); }

  static Matrix diagonal(const Vec<S>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<S> row(std::size_t i) const { return Vec<S>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vec<S> col(std::size_t j) const {
    Vec<S> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend Vec<S> operator*(const Matrix& a, const Vec<S>& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
    Vec<S> r(a.rows_, S(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  const std::vector<S>& data() const { return data_; }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <Field S>
S dot(const Vec<S>& a, const Vec<S>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Field S>
Vec<S> operator+(Vec<S> a, const Vec<S>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sum: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <Field S>
Vec<S> operator-(Vec<S> a, const Vec<S>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector difference: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <Field S>
Vec<S> operator*(const std::type_identity_t<S>& s, Vec<S> a) {
  for (auto& x : a) x *= s;
  return a;
}

template <Field S>
Vec<S> zeros(std::size_t n) {
  return Vec<S>(n, S(0));
}

template <Field S>
double max_abs(const Vec<S>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(to_double(x)));
  return m;
}

template <Field S>
double max_abs(const Matrix<S>& m) {
  double r = 0;
  for (const auto& x : m.data()) r = std::max(r, std::abs(to_double(x)));
  return r;
}

template <Field S>
bool approx_eq(const Vec<S>& a, const Vec<S>& b, Tolerance tol = {}) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_eq<S>(a[i], b[i], tol)) return false;
  return true;
}

template <Field S>
bool approx_eq(const Matrix<S>& a, const Matrix<S>& b, Tolerance tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (!approx_eq<S>(a.data()[k], b.data()[k], tol)) return false;
  return true;
}

template <Field S>
Vec<double> to_double(const Vec<S>& v) {
  Vec<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return r;
}

template <Field S>
Matrix<double> to_double(const Matrix<S>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

/// Row echelon reduction in place. Returns pivot columns. Float mode uses partial pivoting.
template <Field S>
std::vector<std::size_t> row_reduce(Matrix<S>& m, Tolerance tol = {}) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    if constexpr (is_exact_v<S>) {
      for (std::size_t i = r; i < m.rows(); ++i)
        if (m(i, c) != 0) { best = i; break; }
    } else {
      double bv = tol.abs;
      for (std::size_t i = r; i < m.rows(); ++i)
        if (std::abs(m(i, c)) > bv) { bv = std::abs(m(i, c)); best = i; }
    }
    if (best == m.rows()) continue;
    if (best != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    S inv = S(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero<S>(m(i, c), Tolerance{0})) continue;
      S f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <Field S>
std::size_t rank(Matrix<S> m, Tolerance tol = {}) {
  return row_reduce(m, tol).size();
}

template <Field S>
std::size_t rank_of(const std::vector<Vec<S>>& vs, Tolerance tol = {}) {
  if (vs.empty()) return 0;
  return rank(Matrix<S>::from_rows(vs), tol);
}

/// Inverse via Gauss-Jordan; nullopt when singular.
template <Field S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a, Tolerance tol = {}) {
  if (!a.square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = a.rows();
  Matrix<S> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = S(1);
  }
  auto piv = row_reduce(aug, tol);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix<S> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <Field S>
S determinant(Matrix<S> m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  S det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    if constexpr (is_exact_v<S>) {
      for (std::size_t i = c; i < n; ++i)
        if (m(i, c) != 0) { best = i; break; }
    } else {
      double bv = 0;
      for (std::size_t i = c; i < n; ++i)
        if (std::abs(m(i, c)) > bv) { bv = std::abs(m(i, c)); best = i; }
    }
    if (best == n) return S(0);
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(best, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      S f = m(i, c) / m(c, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Basis of {x : a x = 0}.
template <Field S>
std::vector<Vec<S>> null_space(Matrix<S> a, Tolerance tol = {}) {
  auto piv = row_reduce(a, tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<Vec<S>> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec<S> v = zeros<S>(a.cols());
    v[f] = S(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <Field S>
bool is_symmetric(const Matrix<S>& m, Tolerance tol = {}) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (!approx_eq<S>(m(i, j), m(j, i), tol)) return false;
  return true;
}

}  // namespace gptlab
