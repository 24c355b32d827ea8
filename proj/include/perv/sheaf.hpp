#ifndef PERV_SHEAF_HPP
#define PERV_SHEAF_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "perv/geometry.hpp"
#include "perv/matrix.hpp"

namespace perv {

/// Local system on the circle of directions at a point, trivialized along the cut at
/// angle 0: the stalk at any direction θ is identified with the base stalk (angle 0)
/// by turning counterclockwise from 0 to arg θ ∈ [0, 2π).
class CircleLocalSystem {
 public:
  CircleLocalSystem() = default;
  explicit CircleLocalSystem(QMatrix monodromy)
      : monodromy_(std::move(monodromy)) {
    if (!monodromy_.is_square())
      throw Error(ErrorKind::ShapeError, "monodromy must be square, got " + monodromy_.shape_str());
    inverse_ = qmatrix_inverse(monodromy_);
  }
  static CircleLocalSystem trivial(std::size_t dim) { return CircleLocalSystem(QMatrix::identity(dim)); }

  std::size_t dim() const { return monodromy_.rows(); }
  const QMatrix& monodromy() const { return monodromy_; }
  const QMatrix& inverse_monodromy() const { return inverse_; }

  /// T^k in the cut trivialization.
  QMatrix turns(long k) const {
    if (k == 0) return QMatrix::identity(dim());
    if (k == 1) return monodromy_;
    if (k == -1) return inverse_;
    return power(monodromy_, k);
  }

  /// Parallel transport between two lifted directions.
  QMatrix transport(const LiftedDirection& from, const LiftedDirection& to) const {
    return turns(lifted_transport_count(from, to));
  }

  /// Clockwise half-monodromy from direction −ζ to ζ: the junction identification used
  /// whenever a path passes through a point in direction ζ.
  QMatrix junction(const GaussRat& zeta) const {
    return transport({-zeta, 0}, clockwise_lift(-zeta, zeta));
  }

  friend bool operator==(const CircleLocalSystem& a, const CircleLocalSystem& b) {
    return a.monodromy_ == b.monodromy_;
  }

 private:
  QMatrix monodromy_;
  QMatrix inverse_;
};

/// Object of the localized category with singularities in a finite configuration,
/// stored as base stalks at angle 0, monodromies, and the based all-right-avoidance
/// transports for every ordered pair.
class LocalizedPerv {
 public:
  LocalizedPerv() = default;

  /// Validating constructor. `mplus` is indexed by i * n + j; diagonal entries are ignored.
  LocalizedPerv(Configuration config, std::vector<CircleLocalSystem> phi, std::vector<QMatrix> mplus)
      : config_(std::move(config)), phi_(std::move(phi)), mplus_(std::move(mplus)) {
    const std::size_t n = config_.size();
    if (phi_.size() != n)
      throw Error(ErrorKind::ShapeError, "phi has " + std::to_string(phi_.size()) + " entries for " +
                                             std::to_string(n) + " points");
    if (mplus_.size() != n * n) {
      if (n == 1 && mplus_.empty()) mplus_.resize(1);
      else throw Error(ErrorKind::ShapeError, "mplus must hold n*n matrices");
    }
    if (has_horizontal_pair(config_))
      throw Error(ErrorKind::HorizontalPair, "configuration has a horizontal pair; rotate first");
    for (std::size_t i = 0; i < n; ++i) {
      mplus_[i * n + i] = QMatrix(dim(i), dim(i));
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const QMatrix& m = mplus_[i * n + j];
        if (m.rows() != dim(j) || m.cols() != dim(i))
          throw Error(ErrorKind::ShapeError, "mplus " + std::to_string(i) + "->" + std::to_string(j) +
                                                 " has shape " + m.shape_str() + ", expected " +
                                                 std::to_string(dim(j)) + "x" + std::to_string(dim(i)));
      }
    }
  }

  const Configuration& config() const { return config_; }
  std::size_t size() const { return config_.size(); }
  const GaussRat& point(std::size_t i) const { return config_[i]; }
  const CircleLocalSystem& phi(std::size_t i) const { return phi_.at(i); }
  const std::vector<CircleLocalSystem>& phis() const { return phi_; }
  std::size_t dim(std::size_t i) const { return phi_.at(i).dim(); }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (const auto& p : phi_) s += p.dim();
    return s;
  }
  /// Offset of Φ_i inside ⊕_a Φ_a (configuration order).
  std::size_t offset(std::size_t i) const {
    std::size_t s = 0;
    for (std::size_t k = 0; k < i; ++k) s += dim(k);
    return s;
  }

  /// Stored based m⁺ for i ≠ j; Id − T_i on the diagonal.
  QMatrix based(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    if (i == j) return QMatrix::identity(dim(i)) - phi_[i].monodromy();
    return mplus_[i * size() + j];
  }
  const std::vector<QMatrix>& based_all() const { return mplus_; }

  /// Unit direction class from a_i to a_j.
  GaussRat direction(std::size_t i, std::size_t j) const { return point(j) - point(i); }

  friend bool operator==(const LocalizedPerv&, const LocalizedPerv&) = default;

 private:
  void check_index(std::size_t i) const {
    if (i >= size()) throw Error(ErrorKind::UnknownPoint, "point index " + std::to_string(i));
  }

  Configuration config_;
  std::vector<CircleLocalSystem> phi_;
  std::vector<QMatrix> mplus_;
};

inline LocalizedPerv new_localized(Configuration config, std::vector<CircleLocalSystem> phi,
                                   std::vector<QMatrix> mplus) {
  return LocalizedPerv(std::move(config), std::move(phi), std::move(mplus));
}

// Frames -----------------------------------------------------------------------------
//
// A transport a_i → a_j along a path leaving a_i in direction ζ and arriving at a_j from
// direction −ζ is naturally a map between the stalks Φ_i(ζ) and Φ_j(−ζ). In the cut
// trivialization these are matrices between base coordinates ("direction frame"). The
// stored "based" matrix additionally conjugates by the half-monodromies from angle 0 to
// ζ at a_i and from −ζ back to angle 0 at a_j, counterclockwise when Im a_i < Im a_j and
// clockwise otherwise.

namespace detail {
struct BaseConjugators {
  QMatrix pre;   // Φ_i(1) → Φ_i(ζ_ij)
  QMatrix post;  // Φ_j(ζ_ji) → Φ_j(1)
};

inline BaseConjugators base_conjugators(const CircleLocalSystem& src, const CircleLocalSystem& dst,
                                        const GaussRat& a, const GaussRat& b) {
  if (a.im == b.im) throw Error(ErrorKind::HorizontalPair, "horizontal pair has no based frame");
  const GaussRat zeta = b - a;
  const GaussRat one(1);
  const bool ccw = a.im < b.im;
  const LiftedDirection to_out = ccw ? counterclockwise_lift(one, zeta) : clockwise_lift(one, zeta);
  const LiftedDirection back = ccw ? counterclockwise_lift(-zeta, one) : clockwise_lift(-zeta, one);
  return {src.transport({one, 0}, to_out), dst.transport({-zeta, 0}, back)};
}
}  // namespace detail

/// Based matrix → direction frame for the pair (i, j).
inline QMatrix to_direction_frame(const LocalizedPerv& f, std::size_t i, std::size_t j, const QMatrix& based) {
  auto c = detail::base_conjugators(f.phi(i), f.phi(j), f.point(i), f.point(j));
  return qmatrix_inverse(c.post) * based * qmatrix_inverse(c.pre);
}

inline QMatrix to_based_frame(const CircleLocalSystem& src, const CircleLocalSystem& dst, const GaussRat& a,
                              const GaussRat& b, const QMatrix& direction) {
  auto c = detail::base_conjugators(src, dst, a, b);
  return c.post * direction * c.pre;
}

inline QMatrix to_based_frame(const LocalizedPerv& f, std::size_t i, std::size_t j, const QMatrix& direction) {
  return to_based_frame(f.phi(i), f.phi(j), f.point(i), f.point(j), direction);
}

/// Stored m⁺_{ij} in the direction frame.
inline QMatrix direction_mplus(const LocalizedPerv& f, std::size_t i, std::size_t j) {
  return to_direction_frame(f, i, j, f.based(i, j));
}

// Basic objects ----------------------------------------------------------------------

inline LocalizedPerv skyscraper(const GaussRat& a, std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::EmptyObject, "skyscraper of dimension 0");
  return LocalizedPerv(Configuration({a}), {CircleLocalSystem::trivial(dim)}, {QMatrix(dim, dim)});
}

/// The monoidal unit: rank-one skyscraper at the origin.
inline LocalizedPerv unit_object() { return skyscraper(GaussRat(0), 1); }

inline LocalizedPerv zero_object() { return LocalizedPerv(Configuration(), {}, {}); }

/// Pointwise block sum. Points of G not in F are appended; coincident points carry
/// F's block first.
inline LocalizedPerv direct_sum(const LocalizedPerv& f, const LocalizedPerv& g) {
  std::vector<GaussRat> pts = f.config().points();
  std::vector<std::size_t> g_slot(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto it = f.config().index_of(g.point(k));
    if (it) g_slot[k] = *it;
    else {
      g_slot[k] = pts.size();
      pts.push_back(g.point(k));
    }
  }
  const std::size_t n = pts.size();
  std::vector<int> f_of(n, -1), g_of(n, -1);
  for (std::size_t k = 0; k < f.size(); ++k) f_of[k] = static_cast<int>(k);
  for (std::size_t k = 0; k < g.size(); ++k) g_of[g_slot[k]] = static_cast<int>(k);

  auto dims_of = [&](std::size_t c) {
    std::size_t df = f_of[c] >= 0 ? f.dim(static_cast<std::size_t>(f_of[c])) : 0;
    std::size_t dg = g_of[c] >= 0 ? g.dim(static_cast<std::size_t>(g_of[c])) : 0;
    return std::pair{df, dg};
  };

  std::vector<CircleLocalSystem> phi;
  for (std::size_t c = 0; c < n; ++c) {
    auto [df, dg] = dims_of(c);
    QMatrix tf = df ? f.phi(static_cast<std::size_t>(f_of[c])).monodromy() : QMatrix();
    QMatrix tg = dg ? g.phi(static_cast<std::size_t>(g_of[c])).monodromy() : QMatrix();
    phi.emplace_back(block_diag(tf, tg));
  }
  Configuration cfg(pts);
  if (has_horizontal_pair(cfg)) throw Error(ErrorKind::HorizontalPair, "direct sum creates a horizontal pair");
  std::vector<QMatrix> mplus(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d) {
      if (c == d) continue;
      auto [fc, gc] = dims_of(c);
      auto [fd, gd] = dims_of(d);
      QMatrix m(fd + gd, fc + gc);
      if (fc && fd) m.set_block(0, 0, f.based(static_cast<std::size_t>(f_of[c]), static_cast<std::size_t>(f_of[d])));
      if (gc && gd) m.set_block(fd, fc, g.based(static_cast<std::size_t>(g_of[c]), static_cast<std::size_t>(g_of[d])));
      mplus[c * n + d] = std::move(m);
    }
  return LocalizedPerv(std::move(cfg), std::move(phi), std::move(mplus));
}

/// Rotation by q turns the plane through arg q taken in (−π, π]. The new base stalk is the
/// old stalk at direction conj(q), reached from the old base along the short arc; returns
/// R with new coordinates = R · old coordinates for a vector at old direction θ.
inline QMatrix rotation_rebase(const CircleLocalSystem& phi, const GaussRat& theta, const GaussRat& q) {
  const bool turns_left = q.im.sign() > 0 || (q.im.is_zero() && q.re.sign() < 0);
  const auto c = direction_cmp(theta, q.conj());
  if (turns_left) return phi.turns(c >= 0 ? 1 : 0);
  return phi.turns(c < 0 ? -1 : 0);
}

/// Multiply all points by q, re-basing every stalk so that the new angle 0 corresponds
/// to the old direction conj(q). Two rotations compose to the rotation by the product
/// exactly when their angles in (−π, π] add up to an angle in (−π, π]; otherwise the
/// results differ by the full-turn automorphism.
inline LocalizedPerv rotate_by(const LocalizedPerv& f, const GaussRat& q) {
  if (q.is_zero()) throw Error(ErrorKind::DegenerateDirection, "rotation by zero");
  const std::size_t n = f.size();
  std::vector<GaussRat> pts;
  for (const auto& p : f.config()) pts.push_back(p * q);
  Configuration cfg(pts);
  if (has_horizontal_pair(cfg)) throw Error(ErrorKind::HorizontalPair, "rotation creates a horizontal pair");
  std::vector<QMatrix> mplus(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const GaussRat zeta = f.direction(i, j);
      QMatrix m = direction_mplus(f, i, j);
      m = rotation_rebase(f.phi(j), -zeta, q) * m * qmatrix_inverse(rotation_rebase(f.phi(i), zeta, q));
      mplus[i * n + j] = to_based_frame(f.phi(i), f.phi(j), pts[i], pts[j], m);
    }
  return LocalizedPerv(std::move(cfg), f.phis(), std::move(mplus));
}

// GMV presentation ---------------------------------------------------------------------

/// Diagram (Ψ, Φ_i, u_i: Φ_i → Ψ, v_i: Ψ → Φ_i) with every Id − v_i u_i invertible.
struct GmvQData {
  std::size_t psi = 0;
  std::vector<std::size_t> phi_dims;
  std::vector<QMatrix> u;
  std::vector<QMatrix> v;

  void validate() const {
    const std::size_t n = phi_dims.size();
    if (u.size() != n || v.size() != n) throw Error(ErrorKind::ShapeError, "u/v count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i].rows() != psi || u[i].cols() != phi_dims[i] || v[i].rows() != phi_dims[i] || v[i].cols() != psi)
        throw Error(ErrorKind::ShapeError, "u/v shape mismatch at " + std::to_string(i));
      if (!is_invertible(QMatrix::identity(phi_dims[i]) - v[i] * u[i]))
        throw Error(ErrorKind::NotInvertible, "Id - v_i u_i singular at " + std::to_string(i));
    }
  }
};

/// Strict convex position: every point is a vertex of the convex hull and no three
/// hull points are collinear.
inline bool is_convex_position(const Configuration& cfg) {
  const std::size_t n = cfg.size();
  if (n <= 2) return true;
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<GaussRat> dirs;
    for (std::size_t k = 0; k < n; ++k)
      if (k != p) dirs.push_back(cfg[k] - cfg[p]);
    sort_directions(dirs);
    if (dirs.size() < n - 1) return false;  // two others on one ray from p
    bool gap = false;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const GaussRat& u = dirs[k];
      const GaussRat& w = dirs[(k + 1) % dirs.size()];
      if (cross(u, w).sign() < 0) gap = true;
    }
    if (!gap) return false;
  }
  return true;
}

/// Canonical lift to the GMV quiver: Ψ = ⊕_k Φ_{order[k]}, u_i the inclusion of slot i,
/// v_i collecting m_{k i} (with m_{ii} = Id − T_i), so v_j u_i = m_{ij}.
inline GmvQData to_gmv(const LocalizedPerv& f, const std::vector<std::size_t>& spider_order) {
  const std::size_t n = f.size();
  if (!is_convex_position(f.config())) throw Error(ErrorKind::NotConvex, "to_gmv requires convex position");
  std::vector<bool> seen(n, false);
  if (spider_order.size() != n) throw Error(ErrorKind::ShapeError, "spider order is not a permutation");
  for (auto k : spider_order) {
    if (k >= n || seen[k]) throw Error(ErrorKind::ShapeError, "spider order is not a permutation");
    seen[k] = true;
  }
  std::vector<std::size_t> slot_offset(n);
  std::size_t psi = 0;
  for (auto k : spider_order) {
    slot_offset[k] = psi;
    psi += f.dim(k);
  }
  GmvQData q;
  q.psi = psi;
  for (std::size_t i = 0; i < n; ++i) {
    q.phi_dims.push_back(f.dim(i));
    QMatrix u(psi, f.dim(i));
    u.set_block(slot_offset[i], 0, QMatrix::identity(f.dim(i)));
    QMatrix v(f.dim(i), psi);
    for (std::size_t k = 0; k < n; ++k) v.set_block(0, slot_offset[k], f.based(k, i));
    q.u.push_back(std::move(u));
    q.v.push_back(std::move(v));
  }
  q.validate();
  return q;
}

inline LocalizedPerv from_gmv(const GmvQData& q, const Configuration& positions) {
  q.validate();
  const std::size_t n = q.phi_dims.size();
  if (positions.size() != n) throw Error(ErrorKind::ShapeError, "positions do not match GMV data");
  if (!is_convex_position(positions)) throw Error(ErrorKind::NotConvex, "from_gmv requires convex position");
  std::vector<CircleLocalSystem> phi;
  for (std::size_t i = 0; i < n; ++i) phi.emplace_back(QMatrix::identity(q.phi_dims[i]) - q.v[i] * q.u[i]);
  std::vector<QMatrix> mplus(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) mplus[i * n + j] = q.v[j] * q.u[i];
  return LocalizedPerv(positions, std::move(phi), std::move(mplus));
}

/// Monodromy of Ψ around all points, composed in spider order: ∏ (Id − u_i v_i).
inline QMatrix gmv_total_monodromy(const GmvQData& q, const std::vector<std::size_t>& spider_order) {
  QMatrix acc = QMatrix::identity(q.psi);
  for (auto i : spider_order) acc = (QMatrix::identity(q.psi) - q.u[i] * q.v[i]) * acc;
  return acc;
}

}  // namespace perv

#endif  // PERV_SHEAF_HPP
