#ifndef PERV_CONVOLUTION_HPP
#define PERV_CONVOLUTION_HPP

#include <optional>
#include <vector>

#include "perv/transport.hpp"

namespace perv {

/// One summand Φ_{a'}(F) ⊗ Φ_{a''}(G) of a convolution stalk.
struct Splitting {
  std::size_t left = 0;   // point index in F
  std::size_t right = 0;  // point index in G
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;   // block shape is (dim' · dim'') square; kept as rows/cols for serialization
  friend bool operator==(const Splitting&, const Splitting&) = default;
};

/// Block provenance of a convolution: for every result point, its splittings in
/// lexicographic order of (index in F, index in G).
struct TensorIndex {
  std::vector<std::vector<Splitting>> points;
  friend bool operator==(const TensorIndex&, const TensorIndex&) = default;
};

struct Convolution {
  LocalizedPerv sheaf;
  TensorIndex index;
};

/// Scalar s with v = s·u when v is a nonnegative real multiple of u (u ≠ 0).
inline std::optional<Rational> nonnegative_ratio(const GaussRat& v, const GaussRat& u) {
  if (!cross(u, v).is_zero()) return std::nullopt;
  Rational s = dot(v, u) / u.norm2();
  if (s.sign() < 0) return std::nullopt;
  return s;
}

/// Map Φ(ζ) → Φ(−ζ) standing in for the transport of a factor that does not move:
/// the counterclockwise half turn, inverse to the junction.
inline QMatrix spectator(const CircleLocalSystem& phi, const GaussRat& zeta) {
  return phi.transport({zeta, 0}, counterclockwise_lift(zeta, -zeta));
}

/// Additive convolution. The result's m⁻ is assembled in direction stalks: a block
/// (a', a'') → (b', b'') survives only when both displacements are nonnegative multiples
/// of d − c, and equals the tensor product of the factors' m⁻ (or spectator maps).
/// The stored m⁺ is then solved for pair by pair. Assembling m⁺ instead would break
/// St_ζ ⊗-multiplicativity as soon as a pair has two splittings on its segment.
inline Convolution convolve(const LocalizedPerv& f, const LocalizedPerv& g) {
  std::vector<GaussRat> pts;
  TensorIndex index;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t k = 0; k < g.size(); ++k) {
      const GaussRat c = f.point(i) + g.point(k);
      std::size_t slot = pts.size();
      for (std::size_t s = 0; s < pts.size(); ++s)
        if (pts[s] == c) slot = s;
      if (slot == pts.size()) {
        pts.push_back(c);
        index.points.emplace_back();
      }
      auto& splits = index.points[slot];
      const std::size_t d = f.dim(i) * g.dim(k);
      const std::size_t off = splits.empty() ? 0 : splits.back().offset + splits.back().rows;
      splits.push_back({i, k, off, d, d});
    }
  Configuration cfg(pts);
  if (has_horizontal_pair(cfg)) throw Error(ErrorKind::HorizontalPair, "convolution has a horizontal pair; rotate first");

  std::vector<CircleLocalSystem> phi;
  for (const auto& splits : index.points) {
    std::vector<QMatrix> blocks;
    for (const auto& s : splits) blocks.push_back(kron(f.phi(s.left).monodromy(), g.phi(s.right).monodromy()));
    phi.emplace_back(block_diag(blocks));
  }

  // Direction-frame m⁻ of each factor, cached per ordered pair.
  auto dir_cache = [](const LocalizedPerv& x) {
    std::vector<QMatrix> out(x.size() * x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        if (i != j) out[i * x.size() + j] = m_minus(x, i, j, Frame::DirectionStalks);
    return out;
  };
  const auto fdir = dir_cache(f);
  const auto gdir = dir_cache(g);

  const std::size_t n = pts.size();
  std::vector<QMatrix> mminus(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d) {
      if (c == d) continue;
      const GaussRat zeta = pts[d] - pts[c];
      QMatrix m(phi[d].dim(), phi[c].dim());
      for (const auto& src : index.points[c])
        for (const auto& dst : index.points[d]) {
          const GaussRat dl = f.point(dst.left) - f.point(src.left);
          const GaussRat dr = g.point(dst.right) - g.point(src.right);
          if (!nonnegative_ratio(dl, zeta) || !nonnegative_ratio(dr, zeta)) continue;
          QMatrix ml = dl.is_zero() ? spectator(f.phi(src.left), zeta) : fdir[src.left * f.size() + dst.left];
          QMatrix mr = dr.is_zero() ? spectator(g.phi(src.right), zeta) : gdir[src.right * g.size() + dst.right];
          m.set_block(dst.offset, src.offset, kron(ml, mr));
        }
      mminus[c * n + d] = to_based_frame(phi[c], phi[d], pts[c], pts[d], m);
    }
  LocalizedPerv sheaf = solve_triangular(cfg, phi, mminus, [](const LocalizedPerv& x, std::size_t i, std::size_t j) {
    return m_minus(x, i, j);
  });
  return {std::move(sheaf), std::move(index)};
}

/// Permutation P with P·(x ⊗ y) landing in the convolution's ⊕_c Φ_c, where x ∈ ⊕Φ(F)
/// and y ∈ ⊕Φ(G) are in configuration order.
inline QMatrix thom_sebastiani_permutation(const LocalizedPerv& f, const LocalizedPerv& g, const Convolution& fg) {
  const std::size_t df = f.total_dim(), dg = g.total_dim();
  QMatrix p(fg.sheaf.total_dim(), df * dg);
  for (std::size_t c = 0; c < fg.index.points.size(); ++c)
    for (const auto& s : fg.index.points[c]) {
      const std::size_t of = f.offset(s.left), og = g.offset(s.right);
      const std::size_t nf = f.dim(s.left), ng = g.dim(s.right);
      for (std::size_t x = 0; x < nf; ++x)
        for (std::size_t y = 0; y < ng; ++y)
          p(fg.sheaf.offset(c) + s.offset + x * ng + y, (of + x) * dg + og + y) = Rational(1);
    }
  return p;
}

/// Commutation matrix K with K·(x ⊗ y) = y ⊗ x for x ∈ k^m, y ∈ k^n.
inline QMatrix commutation_matrix(std::size_t m, std::size_t n) {
  QMatrix k(m * n, m * n);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < n; ++y) k(y * m + x, x * n + y) = Rational(1);
  return k;
}

/// Canonical isomorphism F*G ≅ G*F: `point_map[c]` is the index in G*F of the c-th
/// point of F*G and `blocks[c]` maps Φ_c(F*G) → Φ_{point_map[c]}(G*F).
struct BraidIso {
  std::vector<std::size_t> point_map;
  std::vector<QMatrix> blocks;
};

inline BraidIso braid_iso(const LocalizedPerv& f, const LocalizedPerv& g, const Convolution& fg,
                          const Convolution& gf) {
  BraidIso iso;
  for (std::size_t c = 0; c < fg.sheaf.size(); ++c) {
    const std::size_t c2 = gf.sheaf.config().require_index(fg.sheaf.point(c));
    iso.point_map.push_back(c2);
    QMatrix b(gf.sheaf.dim(c2), fg.sheaf.dim(c));
    for (const auto& s : fg.index.points[c])
      for (const auto& t : gf.index.points[c2])
        if (t.left == s.right && t.right == s.left)
          b.set_block(t.offset, s.offset, commutation_matrix(f.dim(s.left), g.dim(s.right)));
    iso.blocks.push_back(std::move(b));
  }
  return iso;
}

inline BraidIso braid_iso(const LocalizedPerv& f, const LocalizedPerv& g) {
  return braid_iso(f, g, convolve(f, g), convolve(g, f));
}

/// Data of F*G transported through the braid isomorphism equals the data of G*F.
inline bool braid_check(const LocalizedPerv& f, const LocalizedPerv& g) {
  const Convolution fg = convolve(f, g), gf = convolve(g, f);
  const BraidIso iso = braid_iso(f, g, fg, gf);
  const std::size_t n = fg.sheaf.size();
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t c2 = iso.point_map[c];
    const QMatrix& bc = iso.blocks[c];
    if (bc * fg.sheaf.phi(c).monodromy() != gf.sheaf.phi(c2).monodromy() * bc) return false;
    for (std::size_t d = 0; d < n; ++d) {
      if (c == d) continue;
      const std::size_t d2 = iso.point_map[d];
      if (iso.blocks[d] * fg.sheaf.based(c, d) != gf.sheaf.based(c2, d2) * bc) return false;
    }
  }
  return true;
}

// C_ω operators ----------------------------------------------------------------------

/// Id on ⊕_a Φ_a(ω) plus, for each pair with b − a = ω, the block H_b(ω)·m^±_{ab}
/// (direction stalks). Points in configuration order.
inline QMatrix c_omega(const LocalizedPerv& f, const GaussRat& omega, char sign) {
  if (omega.is_zero()) throw Error(ErrorKind::DegenerateDirection, "C_omega needs a nonzero difference");
  if (sign != '+' && sign != '-') throw Error(ErrorKind::ParseError, "sign must be + or -");
  QMatrix out = QMatrix::identity(f.total_dim());
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (a == b || f.point(b) - f.point(a) != omega) continue;
      TransportEngine e(f, a, b);
      QMatrix m = e.eps(Word(e.r(), sign));
      out.set_block(f.offset(b), f.offset(a), f.phi(b).junction(omega) * m);
    }
  return out;
}

/// All differences b − a of a configuration that are positive multiples of ζ.
inline std::vector<GaussRat> differences_on_ray(const Configuration& cfg, const GaussRat& zeta) {
  std::vector<GaussRat> out;
  for (std::size_t a = 0; a < cfg.size(); ++a)
    for (std::size_t b = 0; b < cfg.size(); ++b) {
      if (a == b) continue;
      const GaussRat w = cfg[b] - cfg[a];
      if (is_parallel_same_dir(w, zeta) && std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
  return out;
}

/// C^{F*G}_ω − Id against Σ over ω' + ω'' = ω (ω', ω'' ∈ [0, ω], not both 0) of
/// N'_{ω'} ⊗ N''_{ω''}, where N_0 = Id and N_ν = C_ν − Id otherwise.
inline bool c_omega_multiplicativity_check(const LocalizedPerv& f, const LocalizedPerv& g, const GaussRat& omega,
                                           char sign) {
  const Convolution fg = convolve(f, g);
  const QMatrix p = thom_sebastiani_permutation(f, g, fg);
  auto parts = [&](const LocalizedPerv& x) {
    std::vector<std::pair<GaussRat, QMatrix>> out{{GaussRat(0), QMatrix::identity(x.total_dim())}};
    for (const auto& w : differences_on_ray(x.config(), omega)) {
      auto s = nonnegative_ratio(w, omega);
      if (s && *s <= Rational(1)) out.emplace_back(w, c_omega(x, w, sign) - QMatrix::identity(x.total_dim()));
    }
    return out;
  };
  QMatrix rhs(f.total_dim() * g.total_dim(), f.total_dim() * g.total_dim());
  for (const auto& [w1, n1] : parts(f))
    for (const auto& [w2, n2] : parts(g))
      if (!(w1.is_zero() && w2.is_zero()) && w1 + w2 == omega) rhs += kron(n1, n2);
  const QMatrix lhs = c_omega(fg.sheaf, omega, sign) - QMatrix::identity(fg.sheaf.total_dim());
  return lhs * p == p * rhs;
}

}  // namespace perv

#endif  // PERV_CONVOLUTION_HPP
