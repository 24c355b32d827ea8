#ifndef PERV_GAUSS_HPP
#define PERV_GAUSS_HPP

#include <compare>
#include <ostream>
#include <string>

#include "perv/rational.hpp"

namespace perv {

/// Exact element of Q(i). Points of the w-plane and their differences live here.
struct GaussRat {
  Rational re;
  Rational im;

  GaussRat() = default;
  GaussRat(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  GaussRat(long r, long i = 0) : re(r), im(i) {}                                          // NOLINT
  GaussRat(int r, int i = 0) : re(r), im(i) {}                                            // NOLINT

  static GaussRat i_unit() { return {0, 1}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  GaussRat conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat& operator+=(const GaussRat& o) { re += o.re; im += o.im; return *this; }
  GaussRat& operator-=(const GaussRat& o) { re -= o.re; im -= o.im; return *this; }
  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    if (b.is_zero()) throw Error(ErrorKind::NotInvertible, "division by zero in Q(i)");
    const Rational n = b.norm2();
    const GaussRat p = a * b.conj();
    return {p.re / n, p.im / n};
  }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }

  friend bool operator==(const GaussRat& a, const GaussRat& b) = default;

  std::string pretty() const {
    if (im.is_zero()) return re.pretty();
    std::string out;
    if (!re.is_zero()) out = re.pretty() + (im.sign() > 0 ? "+" : "-");
    else if (im.sign() < 0) out = "-";
    const Rational a = abs(im);
    if (a != Rational(1)) out += a.pretty();
    return out + "i";
  }
  friend std::ostream& operator<<(std::ostream& os, const GaussRat& z) { return os << z.pretty(); }
};

/// re(u)·im(v) − im(u)·re(v): positive when v lies counterclockwise of u (within π).
inline Rational cross(const GaussRat& u, const GaussRat& v) { return u.re * v.im - u.im * v.re; }
inline Rational dot(const GaussRat& u, const GaussRat& v) { return u.re * v.re + u.im * v.im; }

namespace detail {
// Quarter-turn index of arg(z) in [0, 2π): [0,π/2) → 0, [π/2,π) → 1, ...
inline int quadrant(const GaussRat& z) {
  const int r = z.re.sign();
  const int i = z.im.sign();
  if (r > 0 && i >= 0) return 0;
  if (r <= 0 && i > 0) return 1;
  if (r < 0 && i <= 0) return 2;
  return 3;
}
}  // namespace detail

/// Exact comparison of arg(u) and arg(v) in [0, 2π).
inline std::strong_ordering direction_cmp(const GaussRat& u, const GaussRat& v) {
  if (u.is_zero() || v.is_zero())
    throw Error(ErrorKind::DegenerateDirection, "direction of zero is undefined");
  const int qu = detail::quadrant(u);
  const int qv = detail::quadrant(v);
  if (qu != qv) return qu <=> qv;
  const int c = cross(u, v).sign();
  if (c > 0) return std::strong_ordering::less;
  if (c < 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline bool is_parallel_same_dir(const GaussRat& u, const GaussRat& v) {
  return direction_cmp(u, v) == std::strong_ordering::equal;
}

/// True iff arg(z) lies in (0, π), i.e. the direction points into the upper half plane.
inline bool points_up(const GaussRat& z) { return z.im.sign() > 0; }

}  // namespace perv

#endif  // PERV_GAUSS_HPP
