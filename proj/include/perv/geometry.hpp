#ifndef PERV_GEOMETRY_HPP
#define PERV_GEOMETRY_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "perv/gauss.hpp"

namespace perv {

/// Finite ordered set of pairwise distinct points in Q(i).
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<GaussRat> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i] == points_[j])
          throw Error(ErrorKind::ShapeError, "duplicate point " + points_[i].pretty());
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const GaussRat& operator[](std::size_t i) const { return points_.at(i); }
  const std::vector<GaussRat>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  std::optional<std::size_t> index_of(const GaussRat& p) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == p) return i;
    return std::nullopt;
  }
  std::size_t require_index(const GaussRat& p) const {
    if (auto i = index_of(p)) return *i;
    throw Error(ErrorKind::UnknownPoint, p.pretty() + " is not in the configuration");
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<GaussRat> points_;
};

/// p lies strictly inside the open segment (a, b).
inline bool strictly_between(const GaussRat& p, const GaussRat& a, const GaussRat& b) {
  const GaussRat d = b - a;
  const GaussRat v = p - a;
  if (!cross(v, d).is_zero()) return false;
  const Rational t = dot(v, d);
  return t.sign() > 0 && t < d.norm2();
}

/// Indices of the configuration points strictly inside [a_i, a_j], ordered from a_i to a_j.
inline std::vector<std::size_t> intermediate_indices(const Configuration& cfg, std::size_t i, std::size_t j) {
  if (i >= cfg.size() || j >= cfg.size()) throw Error(ErrorKind::UnknownPoint, "index out of range");
  if (i == j) throw Error(ErrorKind::DegenerateInterval, "interval with equal endpoints");
  const GaussRat& a = cfg[i];
  const GaussRat d = cfg[j] - a;
  std::vector<std::pair<Rational, std::size_t>> hits;
  for (std::size_t k = 0; k < cfg.size(); ++k)
    if (k != i && k != j && strictly_between(cfg[k], a, cfg[j])) hits.emplace_back(dot(cfg[k] - a, d), k);
  std::sort(hits.begin(), hits.end());
  std::vector<std::size_t> out;
  out.reserve(hits.size());
  for (auto& h : hits) out.push_back(h.second);
  return out;
}

inline std::vector<GaussRat> intermediate_points(const GaussRat& a, const GaussRat& b, const Configuration& cfg) {
  if (a == b) throw Error(ErrorKind::DegenerateInterval, "interval with equal endpoints");
  const std::size_t i = cfg.require_index(a);
  const std::size_t j = cfg.require_index(b);
  std::vector<GaussRat> out;
  for (std::size_t k : intermediate_indices(cfg, i, j)) out.push_back(cfg[k]);
  return out;
}

/// Canonical representative of the ray R_{>0}·z: the primitive Gaussian integer on it.
inline GaussRat canonical_direction(const GaussRat& z) {
  if (z.is_zero()) throw Error(ErrorKind::DegenerateDirection, "direction of zero");
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), z.re.den().get_mpz_t(), z.im.den().get_mpz_t());
  mpz_class x = z.re.num() * (l / z.re.den());
  mpz_class y = z.im.num() * (l / z.im.den());
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  x /= g;
  y /= g;
  return {Rational(x, mpz_class(1)), Rational(y, mpz_class(1))};
}

inline void sort_directions(std::vector<GaussRat>& dirs) {
  std::sort(dirs.begin(), dirs.end(),
            [](const GaussRat& u, const GaussRat& v) { return direction_cmp(u, v) < 0; });
  dirs.erase(std::unique(dirs.begin(), dirs.end(),
                         [](const GaussRat& u, const GaussRat& v) { return direction_cmp(u, v) == 0; }),
             dirs.end());
}

/// All directions b − a for distinct a, b, as canonical classes sorted by argument.
inline std::vector<GaussRat> stokes_directions(const Configuration& cfg) {
  std::vector<GaussRat> dirs;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (i != j) dirs.push_back(canonical_direction(cfg[j] - cfg[i]));
  sort_directions(dirs);
  return dirs;
}

inline bool is_stokes_direction(const Configuration& cfg, const GaussRat& zeta) {
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (i != j && is_parallel_same_dir(cfg[j] - cfg[i], zeta)) return true;
  return false;
}

inline bool has_horizontal_pair(const Configuration& cfg) {
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.size(); ++j)
      if (cfg[i].im == cfg[j].im) return true;
  return false;
}

/// No three points on a real line and no horizontal difference.
inline bool is_general_position(const Configuration& cfg) {
  if (has_horizontal_pair(cfg)) return false;
  const std::size_t n = cfg.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (cross(cfg[j] - cfg[i], cfg[k] - cfg[i]).is_zero()) return false;
  return true;
}

/// Partition of the configuration into lines of direction zeta, each sorted along zeta
/// (increasing Re(a·conj(zeta))). Chains are listed by their smallest configuration index.
inline std::vector<std::vector<std::size_t>> ray_order(const GaussRat& zeta, const Configuration& cfg) {
  if (zeta.is_zero()) throw Error(ErrorKind::DegenerateDirection, "ray_order with zero direction");
  std::vector<std::vector<std::size_t>> chains;
  std::vector<bool> used(cfg.size(), false);
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> chain;
    for (std::size_t k = i; k < cfg.size(); ++k)
      if (!used[k] && cross(cfg[k] - cfg[i], zeta).is_zero()) {
        used[k] = true;
        chain.push_back(k);
      }
    std::sort(chain.begin(), chain.end(),
              [&](std::size_t a, std::size_t b) { return dot(cfg[a], zeta) < dot(cfg[b], zeta); });
    chains.push_back(std::move(chain));
  }
  return chains;
}

/// A point of the universal cover of the circle of directions: total angle arg(dir) + 2π·winding.
struct LiftedDirection {
  GaussRat dir;
  long winding = 0;

  friend bool operator==(const LiftedDirection& a, const LiftedDirection& b) {
    return a.winding == b.winding && is_parallel_same_dir(a.dir, b.dir);
  }
};

/// Signed count of multiples of 2π swept when moving monotonically from `from` to `to`.
/// With arg in [0, 2π) this is exactly the winding difference.
inline long lifted_transport_count(const LiftedDirection& from, const LiftedDirection& to) {
  if (from.dir.is_zero() || to.dir.is_zero())
    throw Error(ErrorKind::DegenerateDirection, "lifted direction with zero vector");
  return to.winding - from.winding;
}

/// Lift of `to` reached from (from, 0) by turning clockwise (strictly less than a full turn).
inline LiftedDirection clockwise_lift(const GaussRat& from, const GaussRat& to) {
  return {to, direction_cmp(to, from) < 0 ? 0L : -1L};
}

/// Lift of `to` reached from (from, 0) by turning counterclockwise.
inline LiftedDirection counterclockwise_lift(const GaussRat& from, const GaussRat& to) {
  return {to, direction_cmp(to, from) > 0 ? 0L : 1L};
}

}  // namespace perv

#endif  // PERV_GEOMETRY_HPP
