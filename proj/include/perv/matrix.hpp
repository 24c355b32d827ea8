#ifndef PERV_MATRIX_HPP
#define PERV_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "perv/rational.hpp"

namespace perv {

/// Dense row-major matrix over Q. Zero-sized shapes are legal and behave as the
/// empty linear map, which keeps block bookkeeping free of special cases.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorKind::ShapeError, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }
  static QMatrix scalar(const Rational& s) {
    QMatrix m(1, 1);
    m(0, 0) = s;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x.is_zero(); });
  }
  bool is_identity() const { return is_square() && *this == identity(rows_); }

  friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

  QMatrix& operator+=(const QMatrix& o) {
    check_same_shape(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  QMatrix& operator-=(const QMatrix& o) {
    check_same_shape(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  QMatrix& operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
  friend QMatrix operator*(QMatrix a, const Rational& s) { return a *= s; }
  friend QMatrix operator*(const Rational& s, QMatrix a) { return a *= s; }
  QMatrix operator-() const { return *this * Rational(-1); }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_)
      throw Error(ErrorKind::ShapeError, "product of " + a.shape_str() + " and " + b.shape_str());
    QMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  QMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::ShapeError, "block out of range");
    QMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const QMatrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
      throw Error(ErrorKind::ShapeError, "set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  std::string pretty() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).pretty();
      os << "]";
    }
    os << "]";
    return os.str();
  }
  friend std::ostream& operator<<(std::ostream& os, const QMatrix& m) { return os << m.pretty(); }

 private:
  void check_same_shape(const QMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error(ErrorKind::ShapeError,
                  std::string("operator") + op + " on " + shape_str() + " and " + o.shape_str());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Kronecker product; the left factor indexes the outer blocks.
inline QMatrix kron(const QMatrix& a, const QMatrix& b) {
  QMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

inline QMatrix block_diag(std::span<const QMatrix> blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) { r += b.rows(); c += b.cols(); }
  QMatrix out(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

inline QMatrix block_diag(const QMatrix& a, const QMatrix& b) {
  const QMatrix both[] = {a, b};
  return block_diag(std::span<const QMatrix>(both));
}

namespace detail {
// Row echelon form in place; returns (rank, sign of the row permutation).
inline std::pair<std::size_t, int> echelon(QMatrix& m, QMatrix* companion = nullptr) {
  std::size_t rank = 0;
  int sign = 1;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank) {
      sign = -sign;
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(rank, j));
      if (companion)
        for (std::size_t j = 0; j < companion->cols(); ++j)
          std::swap((*companion)(pivot, j), (*companion)(rank, j));
    }
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      const Rational f = m(r, col) / m(rank, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(r, j) -= f * m(rank, j);
      if (companion)
        for (std::size_t j = 0; j < companion->cols(); ++j)
          (*companion)(r, j) -= f * (*companion)(rank, j);
    }
    ++rank;
  }
  return {rank, sign};
}
}  // namespace detail

inline Rational determinant(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "determinant of " + m.shape_str());
  QMatrix work = m;
  auto [rank, sign] = detail::echelon(work);
  if (rank < m.rows()) return Rational(0);
  Rational det(sign);
  for (std::size_t i = 0; i < m.rows(); ++i) det *= work(i, i);
  return det;
}

inline std::size_t rank(const QMatrix& m) {
  QMatrix work = m;
  return detail::echelon(work).first;
}

/// Exact inverse by Gauss–Jordan elimination.
inline QMatrix qmatrix_inverse(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "inverse of " + m.shape_str());
  const std::size_t n = m.rows();
  QMatrix work = m;
  QMatrix inv = QMatrix::identity(n);
  auto [r, sign] = detail::echelon(work, &inv);
  (void)sign;
  if (r < n) throw Error(ErrorKind::NotInvertible, "singular " + m.shape_str() + " matrix");
  for (std::size_t i = n; i-- > 0;) {
    const Rational p = work(i, i);
    for (std::size_t j = 0; j < n; ++j) inv(i, j) /= p;
    for (std::size_t j = i; j < n; ++j) work(i, j) /= p;
    for (std::size_t k = 0; k < i; ++k) {
      const Rational f = work(k, i);
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) inv(k, j) -= f * inv(i, j);
      for (std::size_t j = i; j < n; ++j) work(k, j) -= f * work(i, j);
    }
  }
  return inv;
}

inline bool is_invertible(const QMatrix& m) { return m.is_square() && !determinant(m).is_zero(); }

/// Integer power; negative exponents go through the exact inverse.
inline QMatrix power(const QMatrix& m, long e) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "power of " + m.shape_str());
  QMatrix base = e < 0 ? qmatrix_inverse(m) : m;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  QMatrix acc = QMatrix::identity(m.rows());
  while (k) {
    if (k & 1u) acc = acc * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return acc;
}

/// Characteristic polynomial det(t·Id − M), coefficients from t^n down to t^0
/// (Faddeev–LeVerrier; exact in characteristic zero).
inline std::vector<Rational> charpoly(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "charpoly of " + m.shape_str());
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1);
  c[0] = Rational(1);
  QMatrix mk = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix am = m * mk;
    Rational tr;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[k] = -tr / Rational(static_cast<long>(k));
    mk = am;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[k];
  }
  return c;
}

/// Level assignment for a nilpotency check: index i sits at level grading[i].
using Grading = std::vector<int>;

/// True iff every nonzero entry of `n` maps a lower level strictly to a higher one.
inline bool strictly_raises(const QMatrix& n, const Grading& grading) {
  if (grading.size() != n.rows() || !n.is_square())
    throw Error(ErrorKind::ShapeError, "grading size does not match matrix");
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j)
      if (!n(i, j).is_zero() && grading[i] <= grading[j]) return false;
  return true;
}

namespace detail {
inline QMatrix nilpotent_series(const QMatrix& n, bool logarithm) {
  const std::size_t dim = n.rows();
  QMatrix acc(dim, dim);
  if (!logarithm) acc = QMatrix::identity(dim);
  QMatrix term = n;
  for (long s = 1; !term.is_zero(); ++s) {
    if (s > static_cast<long>(dim) + 1) throw Error(ErrorKind::NotUnipotent, "series did not terminate");
    Rational coeff = logarithm ? Rational((s % 2) ? 1 : -1, s) : Rational(1) / factorial(static_cast<unsigned>(s));
    acc += term * coeff;
    term = term * n;
  }
  return acc;
}
}  // namespace detail

/// log(Id + N) as a finite series; N = M − Id must strictly raise `grading`.
inline QMatrix nilpotent_log(const QMatrix& m, const Grading& grading) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "log of " + m.shape_str());
  const QMatrix n = m - QMatrix::identity(m.rows());
  if (!strictly_raises(n, grading))
    throw Error(ErrorKind::NotUnipotent, "M - Id is not strictly triangular for the grading");
  return detail::nilpotent_series(n, true);
}

/// log(M) for unipotent M without a grading; nilpotency is checked by N^dim = 0.
inline QMatrix nilpotent_log(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "log of " + m.shape_str());
  const QMatrix n = m - QMatrix::identity(m.rows());
  if (!power(n, static_cast<long>(m.rows())).is_zero())
    throw Error(ErrorKind::NotUnipotent, "M - Id is not nilpotent");
  return detail::nilpotent_series(n, true);
}

/// exp(N) for nilpotent N.
inline QMatrix nilpotent_exp(const QMatrix& n) {
  if (!n.is_square() || !power(n, static_cast<long>(n.rows())).is_zero())
    throw Error(ErrorKind::NotUnipotent, "exp argument is not nilpotent");
  return detail::nilpotent_series(n, false);
}

}  // namespace perv

#endif  // PERV_MATRIX_HPP
