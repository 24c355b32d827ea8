#ifndef PERV_DEFORMATION_HPP
#define PERV_DEFORMATION_HPP

#include <vector>

#include "perv/transport.hpp"

namespace perv {

/// Side word of one ordered pair whose segment had intermediate points before the move.
struct SideAssignment {
  std::size_t from = 0;
  std::size_t to = 0;
  Word word;
  friend bool operator==(const SideAssignment&, const SideAssignment&) = default;
};

/// Straight-line displacement of every point, t ∈ [0, 1], with the sides on which each
/// formerly intermediate point ends up.
struct Perturbation {
  std::vector<GaussRat> displacements;
  std::vector<SideAssignment> sides;
  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

namespace detail {

/// Whether q(t) = a t² + b t + c has a root in (lo, 1], lo ∈ {0 open, 0 closed}.
inline bool quadratic_root_in_unit(const Rational& a, const Rational& b, const Rational& c, bool include_zero) {
  if (a.is_zero() && b.is_zero() && c.is_zero()) return true;
  if (c.is_zero()) {
    if (include_zero) return true;
    // q(t) = t (a t + b): the other root −b/a.
    if (a.is_zero()) return false;
    const Rational r = -b / a;
    return r.sign() > 0 && r <= Rational(1);
  }
  const Rational at_one = a + b + c;
  if (at_one.is_zero()) return true;
  if (at_one.sign() != c.sign()) return true;
  if (a.is_zero()) return false;
  const Rational vertex = -b / (a * Rational(2));
  if (vertex.sign() <= 0 || vertex >= Rational(1)) return false;
  return (b * b - Rational(4) * a * c).sign() >= 0;
}

/// cross(p_j(t) − p_i(t), p_k(t) − p_i(t)) for linear motions, as coefficients (a, b, c).
inline std::array<Rational, 3> triple_cross(const std::vector<GaussRat>& p, const std::vector<GaussRat>& d,
                                            std::size_t i, std::size_t j, std::size_t k) {
  const GaussRat u0 = p[j] - p[i], u1 = d[j] - d[i];
  const GaussRat v0 = p[k] - p[i], v1 = d[k] - d[i];
  return {cross(u1, v1), cross(u0, v1) + cross(u1, v0), cross(u0, v0)};
}

/// Whether Im(p_j(t) − p_i(t)) vanishes for some t ∈ [0, 1].
inline bool crosses_horizontal(const std::vector<GaussRat>& p, const std::vector<GaussRat>& d, std::size_t i,
                               std::size_t j) {
  const Rational y0 = p[j].im - p[i].im;
  const Rational y1 = y0 + d[j].im - d[i].im;
  return y0.sign() * y1.sign() <= 0;
}

inline std::vector<GaussRat> displaced(const Configuration& cfg, const std::vector<GaussRat>& d) {
  std::vector<GaussRat> out;
  for (std::size_t i = 0; i < cfg.size(); ++i) out.push_back(cfg[i] + d[i]);
  return out;
}

}  // namespace detail

/// Validates a displacement of `cfg` and computes its side certificate: '+' for a formerly
/// intermediate point that ends up right of the displaced segment a_i′ → a_j′, '−' for left.
/// This is the assignment under which the Stokes gluing monodromy is unchanged.
inline Perturbation certify(const Configuration& cfg, const std::vector<GaussRat>& displacements) {
  const std::size_t n = cfg.size();
  if (displacements.size() != n)
    throw Error(ErrorKind::ShapeError, "need one displacement per point, got " + std::to_string(displacements.size()));
  const auto& p = cfg.points();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (detail::crosses_horizontal(p, displacements, i, j))
        throw Error(ErrorKind::InvalidPerturbation,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " pass through a horizontal pair");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto q = detail::triple_cross(p, displacements, i, j, k);
        if (detail::quadratic_root_in_unit(q[0], q[1], q[2], false))
          throw Error(ErrorKind::InvalidPerturbation, "points " + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                                          std::to_string(k) + " are collinear during or after the move");
      }
  const std::vector<GaussRat> moved = detail::displaced(cfg, displacements);
  Perturbation out{displacements, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto mid = intermediate_indices(cfg, i, j);
      if (mid.empty()) continue;
      Word w;
      for (std::size_t k : mid) w += cross(moved[j] - moved[i], moved[k] - moved[i]).sign() > 0 ? '-' : '+';
      out.sides.push_back({i, j, std::move(w)});
    }
  return out;
}

namespace detail {

inline void require_certificate(const Configuration& cfg, const Perturbation& p) {
  if (certify(cfg, p.displacements).sides != p.sides)
    throw Error(ErrorKind::InvalidPerturbation, "certificate does not match the displacement");
}

/// Seed words indexed n·i + j: the certificate's word, or empty for pairs without intermediates.
inline std::vector<Word> seed_words(std::size_t n, const Perturbation& p) {
  std::vector<Word> out(n * n);
  for (const auto& s : p.sides) out[s.from * n + s.to] = s.word;
  return out;
}

}  // namespace detail

/// Moves the points of F; the new segment a_i′ → a_j′ carries the old transport m^{ε(i,j)}.
inline LocalizedPerv perturb(const LocalizedPerv& f, const Perturbation& p) {
  detail::require_certificate(f.config(), p);
  const std::size_t n = f.size();
  const auto words = detail::seed_words(n, p);
  std::vector<QMatrix> mplus(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mplus[i * n + j] = i == j ? QMatrix(f.dim(i), f.dim(i)) : m_eps(f, i, j, words[i * n + j]);
  return LocalizedPerv(Configuration(detail::displaced(f.config(), p.displacements)), f.phis(), std::move(mplus));
}

inline LocalizedPerv perturb(const LocalizedPerv& f, const std::vector<GaussRat>& displacements) {
  return perturb(f, certify(f.config(), displacements));
}

/// Inverse of perturb: recovers stored m⁺ on `target` from the generic object `g`.
inline LocalizedPerv specialize(const LocalizedPerv& g, const Configuration& target, const Perturbation& p) {
  if (target.size() != g.size()) throw Error(ErrorKind::InvalidPerturbation, "target has a different point count");
  detail::require_certificate(target, p);
  if (Configuration(detail::displaced(target, p.displacements)) != g.config())
    throw Error(ErrorKind::InvalidPerturbation, "displaced target does not match the perturbed configuration");
  const std::size_t n = g.size();
  const auto words = detail::seed_words(n, p);
  return solve_triangular(target, g.phis(), g.based_all(), [&](const LocalizedPerv& x, std::size_t i, std::size_t j) {
    return m_eps(x, i, j, words[i * n + j]);
  });
}

/// m^Δ_{ij} of the unperturbed object, computed from the perturbed data alone: the
/// generic transports are m^{ε(i,j)} of the collinear geometry, and every other word is
/// reached from them by flips before weighting.
inline QMatrix alien_from_perturbed(const LocalizedPerv& g, const Configuration& target, const Perturbation& p,
                                    std::size_t i, std::size_t j) {
  const std::size_t n = g.size();
  const auto words = detail::seed_words(n, p);
  LocalizedPerv seeded(target, g.phis(), g.based_all());
  TransportEngine e(seeded, i, j, &words);
  QMatrix acc(g.dim(j), g.dim(i));
  for (const auto& w : all_words(e.r())) acc += e.eps(w) * ecalle_coefficient(w);
  return e.to_based(acc);
}

/// Moves point `index` around the closed polyline `path` (absolute positions; the first
/// vertex must be the point's position and the path is closed automatically). Every leg
/// must be free of collinearity and horizontal events involving the moving point. Each
/// leg re-expresses the data through direction stalks at the new directions; the verdict
/// is whether the data returns unchanged.
inline bool drag_check(const LocalizedPerv& f, std::size_t index, const std::vector<GaussRat>& path) {
  if (index >= f.size()) throw Error(ErrorKind::UnknownPoint, "no point " + std::to_string(index));
  if (path.empty() || path.front() != f.point(index))
    throw Error(ErrorKind::ShapeError, "path must start at the dragged point");
  std::vector<GaussRat> loop = path;
  if (loop.back() != loop.front()) loop.push_back(loop.front());
  const std::size_t n = f.size();
  LocalizedPerv cur = f;
  for (std::size_t leg = 0; leg + 1 < loop.size(); ++leg) {
    std::vector<GaussRat> d(n, GaussRat(0));
    d[index] = loop[leg + 1] - loop[leg];
    if (d[index].is_zero()) continue;
    const auto& pts = cur.config().points();
    for (std::size_t k = 0; k < n; ++k) {
      if (k == index) continue;
      if (detail::crosses_horizontal(pts, d, index, k))
        throw Error(ErrorKind::EventOnPath, "leg " + std::to_string(leg) + " meets a horizontal direction");
      for (std::size_t l = k + 1; l < n; ++l) {
        if (l == index) continue;
        const auto q = detail::triple_cross(pts, d, index, k, l);
        if (detail::quadratic_root_in_unit(q[0], q[1], q[2], true))
          throw Error(ErrorKind::EventOnPath, "leg " + std::to_string(leg) + " meets a collinearity with points " +
                                                  std::to_string(k) + ", " + std::to_string(l));
      }
    }
    const Configuration next(detail::displaced(cur.config(), d));
    std::vector<QMatrix> mplus(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          mplus[i * n + j] = QMatrix(f.dim(i), f.dim(i));
          continue;
        }
        const QMatrix dir = to_direction_frame(cur, i, j, cur.based(i, j));
        mplus[i * n + j] = to_based_frame(cur.phi(i), cur.phi(j), next[i], next[j], dir);
      }
    cur = LocalizedPerv(next, cur.phis(), std::move(mplus));
  }
  return cur == f;
}

}  // namespace perv

#endif  // PERV_DEFORMATION_HPP
