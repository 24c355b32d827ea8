#ifndef PERV_LEFSCHETZ_HPP
#define PERV_LEFSCHETZ_HPP

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "perv/stokes.hpp"

namespace perv {

// Exact polynomials over ℚ, coefficients highest degree first ------------------------------

namespace qpoly {

using Poly = std::vector<Rational>;

inline Poly trim(Poly p) {
  std::size_t k = 0;
  while (k + 1 < p.size() && p[k].is_zero()) ++k;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
  return p;
}

inline bool is_zero(const Poly& p) { return std::all_of(p.begin(), p.end(), [](const Rational& c) { return c.is_zero(); }); }

inline std::size_t degree(const Poly& p) { return trim(p).size() - 1; }

inline Poly derivative(const Poly& p) {
  const std::size_t n = p.size() - 1;
  if (n == 0) return {Rational(0)};
  Poly out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(p[k] * Rational(static_cast<long>(n - k)));
  return out;
}

/// Remainder of a by b (b nonzero).
inline Poly remainder(Poly a, const Poly& b_in) {
  const Poly b = trim(b_in);
  a = trim(a);
  while (!is_zero(a) && a.size() >= b.size()) {
    const Rational f = a[0] / b[0];
    for (std::size_t k = 0; k < b.size(); ++k) a[k] -= f * b[k];
    a.erase(a.begin());
    a = trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b) {
  a = trim(a);
  b = trim(b);
  while (!is_zero(b)) {
    Poly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  const Rational lead = a[0];
  if (!lead.is_zero())
    for (auto& c : a) c /= lead;
  return a;
}

inline bool is_squarefree(const Poly& p) { return degree(gcd(p, derivative(p))) == 0; }

inline QMatrix evaluate(const Poly& p, const QMatrix& m) {
  QMatrix acc(m.rows(), m.cols());
  for (const auto& c : p) acc = acc * m + QMatrix::identity(m.rows()) * c;
  return acc;
}

/// Companion matrix of a polynomial of degree ≥ 1: multiplication by x on ℚ[x]/(p).
inline QMatrix companion(const Poly& p_in) {
  const Poly p = trim(p_in);
  const std::size_t n = p.size() - 1;
  QMatrix c(n, n);
  for (std::size_t k = 0; k + 1 < n; ++k) c(k + 1, k) = Rational(1);
  for (std::size_t k = 0; k < n; ++k) c(k, n - 1) = -p[n - k] / p[0];
  return c;
}

}  // namespace qpoly

// Multiprecision complex numbers --------------------------------------------------------

namespace numeric {

using Real = boost::multiprecision::mpfr_float;

/// Sets the working precision (decimal digits) for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : old_(Real::default_precision()) { Real::default_precision(digits); }
  ~PrecisionScope() { Real::default_precision(old_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned old_;
};

inline Real to_real(const Rational& q) {
  Real x;
  mpfr_set_q(x.backend().data(), q.raw().get_mpq_t(), MPFR_RNDN);
  return x;
}

/// Nearest multiple of 2^{-bits}.
inline Rational round_dyadic(const Real& x, unsigned bits) {
  Real scaled = ldexp(x, static_cast<int>(bits));
  Real r = round(scaled);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), r.backend().data(), MPFR_RNDN);
  mpz_class den = 1;
  den <<= bits;
  return Rational(z, den);
}

struct Cx {
  Real re{0}, im{0};
  Cx() = default;
  Cx(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  explicit Cx(const GaussRat& g) : re(to_real(g.re)), im(to_real(g.im)) {}
  Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
  Cx operator-(const Cx& o) const { return {re - o.re, im - o.im}; }
  Cx operator-() const { return {-re, -im}; }
  Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Cx operator*(const Real& s) const { return {re * s, im * s}; }
  Cx operator/(const Cx& o) const {
    const Real d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  Cx conj() const { return {re, -im}; }
  Real abs() const { return sqrt(re * re + im * im); }
};

inline Cx polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

inline Real pi() { return boost::math::constants::pi<Real>(); }

inline Real epsilon_for(unsigned digits) { return pow(Real(10), -static_cast<int>(digits)); }

inline Cx horner(const std::vector<Cx>& p, const Cx& x) {
  Cx acc;
  for (const auto& c : p) acc = acc * x + c;
  return acc;
}

inline std::vector<Cx> derivative(const std::vector<Cx>& p) {
  const std::size_t n = p.size() - 1;
  std::vector<Cx> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(p[k] * Real(static_cast<long>(n - k)));
  return out;
}

/// Aberth–Ehrlich iteration from the given starting points. Returns whether the
/// corrections fell below tolerance.
inline bool aberth(const std::vector<Cx>& p, std::vector<Cx>& z, const Real& tol, int max_iter = 200) {
  const auto dp = derivative(p);
  const std::size_t n = z.size();
  for (int it = 0; it < max_iter; ++it) {
    Real worst(0);
    for (std::size_t k = 0; k < n; ++k) {
      const Cx pk = horner(p, z[k]);
      if (pk.re == 0 && pk.im == 0) continue;
      const Cx ratio = pk / horner(dp, z[k]);
      Cx sum;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum = sum + Cx(Real(1)) / (z[k] - z[j]);
      const Cx step = ratio / (Cx(Real(1)) - ratio * sum);
      z[k] = z[k] - step;
      worst = std::max(worst, step.abs() / (Real(1) + z[k].abs()));
    }
    if (worst < tol) return true;
  }
  return false;
}

/// Inclusion radii: the disks D(z_k, r_k) cover all roots, and a component made of m
/// disks holds exactly m roots. Inflated to absorb rounding.
inline std::vector<Real> inclusion_radii(const std::vector<Cx>& p, const std::vector<Cx>& z, const Real& slack) {
  const std::size_t n = z.size();
  const Real lead = p[0].abs();
  std::vector<Real> r(n);
  for (std::size_t k = 0; k < n; ++k) {
    Real prod = lead;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) prod *= (z[k] - z[j]).abs();
    r[k] = Real(2) * Real(static_cast<long>(n)) * horner(p, z[k]).abs() / prod + slack;
  }
  return r;
}

inline bool disks_disjoint(const std::vector<Cx>& z, const std::vector<Real>& r) {
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if ((z[i] - z[j]).abs() <= r[i] + r[j]) return false;
  return true;
}

inline Real min_separation(const std::vector<Cx>& z) {
  Real best(-1);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const Real d = (z[i] - z[j]).abs();
      if (best < 0 || d < best) best = d;
    }
  return best;
}

/// Roots of p from scratch, certified by disjoint inclusion disks.
inline std::optional<std::pair<std::vector<Cx>, std::vector<Real>>> certified_roots(const std::vector<Cx>& p,
                                                                                    unsigned digits) {
  const std::size_t n = p.size() - 1;
  Real bound(0);
  for (std::size_t k = 1; k <= n; ++k) bound = std::max(bound, (p[k] / p[0]).abs());
  const Real radius = Real(1) + bound;
  std::vector<Cx> z;
  for (std::size_t k = 0; k < n; ++k)
    z.push_back(polar(radius, Real(2) * pi() * Real(static_cast<long>(k)) / Real(static_cast<long>(n)) + Real(0.4)));
  if (!aberth(p, z, epsilon_for(digits * 4 / 5), 2000)) return std::nullopt;
  auto r = inclusion_radii(p, z, epsilon_for(digits * 3 / 4));
  if (!disks_disjoint(z, r)) return std::nullopt;
  return std::make_pair(std::move(z), std::move(r));
}

/// A path in the w-plane: straight segments and circular arcs, traversed in order.
struct PathPiece {
  bool arc = false;
  Cx from, to;                 // segment endpoints
  Cx center;                   // arc data
  Real radius{0}, angle0{0}, angle1{0};
  Cx at(const Real& s) const {
    if (!arc) return from + (to - from) * s;
    return center + polar(radius, angle0 + (angle1 - angle0) * s);
  }
};

inline PathPiece segment(const Cx& a, const Cx& b) { return {false, a, b, Cx(), Real(0), Real(0), Real(0)}; }
inline PathPiece arc(const Cx& c, const Real& r, const Real& a0, const Real& a1) {
  return {true, Cx(), Cx(), c, r, a0, a1};
}

/// Coefficients of scale·S(x) − w.
inline std::vector<Cx> fiber_poly(const std::vector<Cx>& scaled, const Cx& w) {
  std::vector<Cx> p = scaled;
  p.back() = p.back() - w;
  return p;
}

/// Continues the roots of scale·S(x) = w along the path. Steps adapt until every root
/// moves less than a quarter of the current separation, with a consistent midpoint.
inline std::optional<std::vector<Cx>> track(const std::vector<Cx>& scaled, std::vector<Cx> roots,
                                            const std::vector<PathPiece>& path, unsigned digits) {
  const Real tol = epsilon_for(digits * 4 / 5);
  const Real floor = epsilon_for(digits / 3);
  for (const auto& piece : path) {
    Real s(0), h(Real(1) / 16);
    while (s < 1) {
      if (s + h > 1) h = Real(1) - s;
      if (h < floor) return std::nullopt;
      const Real sep = min_separation(roots);
      std::vector<Cx> mid = roots, next = roots;
      const bool ok_mid = aberth(fiber_poly(scaled, piece.at(s + h / 2)), mid, tol, 60);
      const bool ok_next = aberth(fiber_poly(scaled, piece.at(s + h)), next, tol, 60);
      bool ok = ok_mid && ok_next;
      for (std::size_t k = 0; ok && k < roots.size(); ++k)
        ok = (mid[k] - roots[k]).abs() < sep / 4 && (next[k] - mid[k]).abs() < sep / 4 &&
             (next[k] - roots[k]).abs() < sep / 4;
      if (ok) ok = min_separation(next) > sep / 4;
      if (!ok) {
        h /= 2;
        continue;
      }
      roots = std::move(next);
      s += h;
      h *= Real(3) / 2;
    }
  }
  return roots;
}

/// Deterministic labelling: by real part, then imaginary part, with a tolerance.
inline std::vector<std::size_t> sorted_labels(const std::vector<Cx>& z, const Real& tol) {
  std::vector<std::size_t> idx(z.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (abs(z[a].re - z[b].re) > tol) return z[a].re < z[b].re;
    return z[a].im < z[b].im;
  });
  std::vector<std::size_t> label(z.size());
  for (std::size_t k = 0; k < idx.size(); ++k) label[idx[k]] = k;
  return label;
}

inline std::string to_string(const Real& x, int digits = 20) { return x.str(digits, std::ios_base::scientific); }

}  // namespace numeric

// Lefschetz sheaves ----------------------------------------------------------------------

struct CriticalValueReport {
  std::string re, im, radius;  // certified enclosure, before rotation
  GaussRat surrogate;          // exact position used in the object (after rotation)
};

struct LefschetzResult {
  std::vector<Rational> coefficients;  // highest degree first
  GaussRat rotation;                   // the object is the Lefschetz sheaf of rotation·S
  unsigned precision = 0;              // decimal digits of the accepted run
  std::vector<CriticalValueReport> critical_values;
  QMatrix transports;                  // based m⁺ scalars, row = source, diagonal zero
};

struct LefschetzSheaf {
  LocalizedPerv sheaf;
  LefschetzResult report;
};

namespace detail {

inline void require_polynomial(const std::vector<Rational>& coeffs) {
  if (coeffs.size() < 3) throw Error(ErrorKind::DegenerateFunction, "need degree at least 2");
  if (coeffs.front().is_zero()) throw Error(ErrorKind::DegenerateFunction, "leading coefficient is zero");
}

/// Exact Morse test: S′ squarefree and the critical values S(c) pairwise distinct.
inline void require_morse(const std::vector<Rational>& coeffs) {
  require_polynomial(coeffs);
  const auto ds = qpoly::derivative(coeffs);
  if (!qpoly::is_squarefree(ds)) throw Error(ErrorKind::DegenerateFunction, "S' has a repeated root");
  if (qpoly::degree(ds) >= 2) {
    const QMatrix values = qpoly::evaluate(coeffs, qpoly::companion(ds));
    if (!qpoly::is_squarefree(charpoly(values)))
      throw Error(ErrorKind::DegenerateFunction, "two critical points share a critical value");
  }
}

inline std::vector<numeric::Cx> scaled_coefficients(const std::vector<Rational>& coeffs, const GaussRat& q) {
  std::vector<numeric::Cx> out;
  for (const auto& c : coeffs) out.push_back(numeric::Cx(q * GaussRat(c)));
  return out;
}

/// One attempt at a fixed precision; nullopt asks for more digits. `words` (indexed n·a + b)
/// selects the avoidance side per intermediate value; by default every value is passed
/// on the right, which gives the stored m⁺. The report's table holds the computed
/// transports; the object is only meaningful for the default words.
inline std::optional<LefschetzSheaf> lefschetz_attempt(const std::vector<Rational>& coeffs, unsigned digits,
                                                        const std::vector<Word>* words = nullptr) {
  using namespace numeric;
  PrecisionScope scope(digits);
  const std::size_t d = coeffs.size() - 1;
  const std::size_t n = d - 1;
  const auto plain = scaled_coefficients(coeffs, GaussRat(1));

  // Critical points and values with enclosures.
  const auto crit = certified_roots(derivative(plain), digits);
  if (!crit) return std::nullopt;
  const auto& [cpts, crad] = *crit;
  std::vector<Cx> values;
  std::vector<Real> vrad;
  for (std::size_t k = 0; k < n; ++k) {
    values.push_back(horner(plain, cpts[k]));
    Real bound(0);
    const Real reach = cpts[k].abs() + crad[k];
    for (std::size_t j = 0; j < d; ++j)
      bound += plain[j].abs() * Real(static_cast<long>(d - j)) * pow(reach, static_cast<int>(d - j - 1));
    vrad.push_back(crad[k] * bound);
  }
  // A critical point is real when its disk meets the axis and its mirror image meets no
  // other disk; its value is then exactly real.
  std::vector<bool> real(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (abs(cpts[k].im) > crad[k]) continue;
    bool alone = true;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k && (cpts[k].conj() - cpts[j]).abs() <= crad[k] + crad[j]) alone = false;
    real[k] = alone;
  }

  // Rotation: no pair of rotated values may be horizontal.
  const std::vector<GaussRat> rotations{GaussRat(1), GaussRat(0, 1), GaussRat(1, 2), GaussRat(2, 1), GaussRat(1, 3),
                                        GaussRat(3, 1), GaussRat(2, 3), GaussRat(3, 2)};
  std::optional<GaussRat> rotation;
  for (const auto& q : rotations) {
    const Cx qc(q);
    bool ok = true;
    for (std::size_t a = 0; ok && a < n; ++a)
      for (std::size_t b = a + 1; ok && b < n; ++b) {
        const Real im = (qc * (values[b] - values[a])).im;
        ok = abs(im) > Real(4) * qc.abs() * (vrad[a] + vrad[b]);
      }
    if (ok) {
      rotation = q;
      break;
    }
  }
  if (!rotation) return std::nullopt;
  const Cx qc(*rotation);
  std::vector<Cx> u;
  for (const auto& v : values) u.push_back(qc * v);
  std::vector<Real> urad;
  for (const auto& r : vrad) urad.push_back(r * qc.abs());

  // Triple structure: certified orientation, or exactly collinear on the rotated real axis.
  std::vector<std::vector<std::vector<int>>> orient(n, std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        if (real[a] && real[b] && real[c]) continue;
        const Cx x = u[b] - u[a], y = u[c] - u[a];
        const Real cr = x.re * y.im - x.im * y.re;
        const Real slack = Real(4) * (urad[a] + urad[b] + urad[c]) * (x.abs() + y.abs() + Real(1));
        if (abs(cr) <= slack) return std::nullopt;
        orient[a][b][c] = cr > 0 ? 1 : -1;
      }

  // Surrogate positions: coarsest dyadic grid preserving every certified sign.
  std::vector<GaussRat> surrogate;
  for (unsigned bits = 0; bits <= static_cast<unsigned>(digits); ++bits) {
    surrogate.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (real[k])
        surrogate.push_back(*rotation * GaussRat(round_dyadic(values[k].re, bits)));
      else
        surrogate.push_back(GaussRat(round_dyadic(u[k].re, bits), round_dyadic(u[k].im, bits)));
    }
    const Real move = ldexp(Real(1), -static_cast<int>(bits)) * (Real(1) + qc.abs());
    bool ok = true;
    for (std::size_t a = 0; ok && a < n; ++a)
      for (std::size_t b = 0; ok && b < n; ++b) {
        if (a == b) continue;
        const Real im = u[b].im - u[a].im;
        const Rational sim = surrogate[b].im - surrogate[a].im;
        ok = sim.sign() != 0 && (sim.sign() > 0) == (im > 0) && abs(im) > Real(4) * (move + urad[a] + urad[b]);
        for (std::size_t c = 0; ok && c < n; ++c) {
          if (c == a || c == b || orient[a][b][c] == 0) continue;
          const Cx x = u[b] - u[a], y = u[c] - u[a];
          const Real cr = x.re * y.im - x.im * y.re;
          const Rational sc = cross(surrogate[b] - surrogate[a], surrogate[c] - surrogate[a]);
          const Real drift = Real(8) * (move + urad[a] + urad[b] + urad[c]) * (x.abs() + y.abs() + Real(1));
          ok = sc.sign() == orient[a][b][c] && abs(cr) > drift;
        }
      }
    if (ok) break;
    if (bits == digits) return std::nullopt;
  }
  const Configuration cfg(surrogate);

  // Scale for detours: well below every distance between a value and a segment it is not on.
  Real delta(-1);
  auto consider = [&](const Real& x) {
    if (delta < 0 || x < delta) delta = x;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      consider((u[b] - u[a]).abs());
      const auto mids = intermediate_indices(cfg, a, b);
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b || std::find(mids.begin(), mids.end(), c) != mids.end()) continue;
        const Cx x = u[b] - u[a], y = u[c] - u[a];
        Real t = (x.re * y.re + x.im * y.im) / (x.re * x.re + x.im * x.im);
        t = std::max(Real(0), std::min(Real(1), t));
        consider((u[a] + x * t - u[c]).abs());
      }
    }
  const auto scaled = scaled_coefficients(coeffs, *rotation);
  const Real label_tol = epsilon_for(digits / 3);

  // Fibers over u_k + ε with vanishing classes Δ_k = e_i − e_j (i < j in label order).
  Real eps = delta / 8;
  std::vector<std::vector<Cx>> start_roots(n);
  std::vector<std::pair<std::size_t, std::size_t>> vanishing(n);
  for (int shrink = 0;; ++shrink) {
    if (shrink > 6) return std::nullopt;
    bool ok = true;
    for (std::size_t k = 0; ok && k < n; ++k) {
      auto r = certified_roots(fiber_poly(scaled, u[k] + Cx(eps)), digits);
      if (!r) return std::nullopt;
      start_roots[k] = r->first;
      const auto& z = start_roots[k];
      std::vector<std::size_t> by_dist(d);
      std::iota(by_dist.begin(), by_dist.end(), 0);
      std::sort(by_dist.begin(), by_dist.end(),
                [&](std::size_t x, std::size_t y) { return (z[x] - cpts[k]).abs() < (z[y] - cpts[k]).abs(); });
      if (d > 2) ok = (z[by_dist[2]] - cpts[k]).abs() > Real(8) * (z[by_dist[1]] - cpts[k]).abs();
      const auto label = sorted_labels(z, label_tol);
      std::size_t i = label[by_dist[0]], j = label[by_dist[1]];
      if (i > j) std::swap(i, j);
      vanishing[k] = {i, j};
    }
    if (ok) break;
    eps /= 16;
  }

  // Based transports: arc at a from 0 to ζ, the segment with semicircle detours (the path
  // passes a '+' value on its right, a '-' value on its left), arc at b from −ζ back to 0.
  QMatrix table(n, n);
  std::vector<QMatrix> mplus(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      mplus[a * n + b] = QMatrix(1, 1);
      if (a == b) continue;
      const Cx zeta = (u[b] - u[a]) / Cx((u[b] - u[a]).abs());
      const Real phi = atan2(zeta.im, zeta.re);
      const bool up = u[b].im > u[a].im;
      std::vector<PathPiece> path{arc(u[a], eps, Real(0), phi)};
      Cx cursor = u[a] + zeta * eps;
      const auto mids = intermediate_indices(cfg, a, b);
      const Word word = words ? (*words)[a * n + b] : Word(mids.size(), '+');
      if (word.size() != mids.size()) throw Error(ErrorKind::WordLength, "word for " + std::to_string(a) + "->" + std::to_string(b));
      for (std::size_t t = 0; t < mids.size(); ++t) {
        const std::size_t c = mids[t];
        path.push_back(segment(cursor, u[c] - zeta * eps));
        path.push_back(arc(u[c], eps, phi + pi(), word[t] == '+' ? phi + Real(2) * pi() : phi));
        cursor = u[c] + zeta * eps;
      }
      path.push_back(segment(cursor, u[b] - zeta * eps));
      path.push_back(arc(u[b], eps, phi + pi(), up ? Real(2) * pi() : Real(0)));
      auto end = track(scaled, start_roots[a], path, digits);
      if (!end) return std::nullopt;
      const auto start_label = sorted_labels(start_roots[a], label_tol);
      const auto end_label = sorted_labels(*end, label_tol);
      // The tracked root with start label s carries end label end_label[k].
      std::vector<std::size_t> carry(d);
      for (std::size_t k = 0; k < d; ++k) carry[start_label[k]] = end_label[k];
      // Position-match the end fiber with the reference fiber at b.
      const auto ref_label = sorted_labels(start_roots[b], label_tol);
      std::vector<std::size_t> to_ref(d);
      for (std::size_t k = 0; k < d; ++k) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < d; ++j)
          if (((*end)[k] - start_roots[b][j]).abs() < ((*end)[k] - start_roots[b][best]).abs()) best = j;
        to_ref[end_label[k]] = ref_label[best];
      }
      const auto [i, j] = vanishing[a];
      const auto [k, l] = vanishing[b];
      const std::size_t hi = to_ref[carry[i]], hj = to_ref[carry[j]];
      // Variation sign: the transport is −⟨σ Δ_a, Δ_b⟩ under ⟨e_p, e_q⟩ = δ_pq.
      long pairing = 0;
      pairing -= (hi == k) - (hi == l);
      pairing += (hj == k) - (hj == l);
      table(a, b) = Rational(pairing);
      mplus[a * n + b] = QMatrix{{Rational(pairing)}};
    }

  std::vector<CircleLocalSystem> phi(n, CircleLocalSystem(QMatrix{{-1}}));
  LefschetzResult report{coeffs, *rotation, digits, {}, table};
  for (std::size_t k = 0; k < n; ++k)
    report.critical_values.push_back({to_string(values[k].re), to_string(values[k].im), to_string(vrad[k], 6), surrogate[k]});
  return LefschetzSheaf{LocalizedPerv(cfg, std::move(phi), std::move(mplus)), std::move(report)};
}

inline std::optional<QMatrix> infinity_attempt(const std::vector<Rational>& coeffs, unsigned digits) {
  using namespace numeric;
  PrecisionScope scope(digits);
  const std::size_t d = coeffs.size() - 1;
  const auto plain = scaled_coefficients(coeffs, GaussRat(1));
  Real radius(2);
  if (d >= 2) {
    const auto crit = certified_roots(derivative(plain), digits);
    if (!crit) return std::nullopt;
    for (const auto& c : crit->first) radius = std::max(radius, Real(2) * horner(plain, c).abs() + Real(2));
  }
  const auto start = certified_roots(fiber_poly(plain, Cx(radius)), digits);
  if (!start) return std::nullopt;
  std::vector<PathPiece> path;
  for (int quarter = 0; quarter < 4; ++quarter)
    path.push_back(arc(Cx(), radius, pi() * Real(quarter) / 2, pi() * Real(quarter + 1) / 2));
  const auto end = track(plain, start->first, path, digits);
  if (!end) return std::nullopt;
  const Real tol = epsilon_for(digits / 3);
  const auto s = sorted_labels(start->first, tol);
  const auto e = sorted_labels(*end, tol);
  std::vector<std::size_t> perm(d);
  for (std::size_t k = 0; k < d; ++k) perm[s[k]] = e[k];
  // The loop around every critical value permutes the roots in one d-cycle.
  std::size_t len = 1;
  for (std::size_t x = perm[0]; x != 0; x = perm[x]) ++len;
  if (len != d) return std::nullopt;
  // Basis f_k = e_k − e_{k+1} of the sum-zero part of k^d.
  auto coords = [&](std::size_t p, std::size_t q) {
    std::vector<Rational> v(d - 1, Rational(0));
    const Rational sign = p < q ? Rational(1) : Rational(-1);
    for (std::size_t k = std::min(p, q); k < std::max(p, q); ++k) v[k] = sign;
    return v;
  };
  QMatrix m(d - 1, d - 1);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const auto col = coords(perm[k], perm[k + 1]);
    for (std::size_t r = 0; r + 1 < d; ++r) m(r, k) = col[r];
  }
  return m;
}

}  // namespace detail

constexpr unsigned kDefaultPrecision = 50;
constexpr int kPrecisionRetries = 4;

/// Lefschetz perverse sheaf of S (coefficients highest degree first). Accepted once a run
/// and a run at twice its precision produce identical data.
inline LefschetzSheaf lefschetz_sheaf(const std::vector<Rational>& coeffs, unsigned digits = kDefaultPrecision) {
  detail::require_morse(coeffs);
  unsigned p = std::max(digits, 20u);
  for (int attempt = 0; attempt <= kPrecisionRetries; ++attempt, p *= 2) {
    auto first = detail::lefschetz_attempt(coeffs, p);
    if (!first) continue;
    auto second = detail::lefschetz_attempt(coeffs, 2 * p);
    if (!second) continue;
    if (first->sheaf == second->sheaf) return *first;
  }
  throw Error(ErrorKind::PrecisionExhausted, "continuation did not stabilize up to " + std::to_string(p) + " digits");
}

/// Transports m^ε of the Lefschetz sheaf computed directly by continuation along the
/// avoidance paths given by `words` (indexed n·a + b, one word per ordered pair), in the
/// based frame of lefschetz_sheaf's object. Row a, column b holds the transport a → b.
inline QMatrix lefschetz_transports(const std::vector<Rational>& coeffs, const std::vector<Word>& words,
                                    unsigned digits = kDefaultPrecision) {
  detail::require_morse(coeffs);
  unsigned p = std::max(digits, 20u);
  for (int attempt = 0; attempt <= kPrecisionRetries; ++attempt, p *= 2) {
    auto first = detail::lefschetz_attempt(coeffs, p, &words);
    auto second = first ? detail::lefschetz_attempt(coeffs, 2 * p, &words) : std::nullopt;
    if (first && second && first->report.transports == second->report.transports) return first->report.transports;
  }
  throw Error(ErrorKind::PrecisionExhausted, "continuation did not stabilize");
}

/// Root permutation around a large circle, acting on the sum-zero part of k^d.
inline QMatrix monodromy_at_infinity(const std::vector<Rational>& coeffs, unsigned digits = kDefaultPrecision) {
  detail::require_polynomial(coeffs);
  unsigned p = std::max(digits, 20u);
  for (int attempt = 0; attempt <= kPrecisionRetries; ++attempt, p *= 2) {
    auto first = detail::infinity_attempt(coeffs, p);
    auto second = first ? detail::infinity_attempt(coeffs, 2 * p) : std::nullopt;
    if (first && second && *first == *second) return *first;
  }
  throw Error(ErrorKind::PrecisionExhausted, "monodromy at infinity did not stabilize");
}

/// A non-Stokes direction for the configuration, from a fixed candidate list.
inline GaussRat generic_base(const Configuration& cfg) {
  for (long k = 1;; ++k)
    for (const GaussRat& z : {GaussRat(k, 1L), GaussRat(-1L, k), GaussRat(-k, -1L), GaussRat(1L, -k)})
      if (!is_stokes_direction(cfg, z)) return z;
}

struct ConsistencyReport {
  std::vector<Rational> gluing_charpoly, infinity_charpoly;
  std::size_t gluing_rank_minus_one = 0, infinity_rank_minus_one = 0;
  std::size_t gluing_rank_plus_one = 0, infinity_rank_plus_one = 0;
  bool consistent = false;
};

/// The Stokes gluing monodromy of the generated object against the root monodromy at
/// infinity. Both characteristic polynomials must agree; the one at infinity is
/// squarefree, so agreement means conjugacy over ℚ. Rank profiles are reported as well.
inline ConsistencyReport global_consistency(const LocalizedPerv& f, const std::vector<Rational>& coeffs,
                                            unsigned digits = kDefaultPrecision) {
  const QMatrix glue = ft_monodromy(f, generic_base(f.config()));
  const QMatrix inf = monodromy_at_infinity(coeffs, digits);
  ConsistencyReport r;
  r.gluing_charpoly = charpoly(glue);
  r.infinity_charpoly = charpoly(inf);
  const std::size_t n = glue.rows();
  r.gluing_rank_minus_one = rank(glue - QMatrix::identity(n));
  r.infinity_rank_minus_one = rank(inf - QMatrix::identity(inf.rows()));
  r.gluing_rank_plus_one = rank(glue + QMatrix::identity(n));
  r.infinity_rank_plus_one = rank(inf + QMatrix::identity(inf.rows()));
  r.consistent = r.gluing_charpoly == r.infinity_charpoly && r.gluing_rank_minus_one == r.infinity_rank_minus_one &&
                 r.gluing_rank_plus_one == r.infinity_rank_plus_one && qpoly::is_squarefree(r.infinity_charpoly);
  return r;
}

}  // namespace perv

#endif  // PERV_LEFSCHETZ_HPP
