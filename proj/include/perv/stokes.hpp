#ifndef PERV_STOKES_HPP
#define PERV_STOKES_HPP

#include <algorithm>
#include <vector>

#include "perv/convolution.hpp"

namespace perv {

/// Level of each basis vector of ⊕_a Φ_a under the order Re(a·conj ζ).
inline Grading ray_grading(const LocalizedPerv& f, const GaussRat& zeta) {
  std::vector<Rational> levels;
  for (const auto& p : f.config()) levels.push_back(dot(p, zeta));
  std::vector<Rational> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Grading g;
  for (std::size_t a = 0; a < f.size(); ++a) {
    const int level = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), levels[a]) - sorted.begin());
    g.insert(g.end(), f.dim(a), level);
  }
  return g;
}

struct StokesData {
  GaussRat direction;
  std::vector<std::vector<std::size_t>> chains;
  QMatrix op;
  Grading grading;
};

/// Id + Σ_{ω ∈ R_{>0} ζ} (C^±_ω − Id), on ⊕_a Φ_a(ζ).
inline StokesData stokes_operator(const LocalizedPerv& f, const GaussRat& zeta, char sign = '-') {
  if (zeta.is_zero()) throw Error(ErrorKind::DegenerateDirection, "Stokes operator of the zero direction");
  StokesData s{canonical_direction(zeta), ray_order(zeta, f.config()), QMatrix::identity(f.total_dim()),
               ray_grading(f, zeta)};
  for (const auto& w : differences_on_ray(f.config(), zeta)) s.op += c_omega(f, w, sign) - QMatrix::identity(f.total_dim());
  return s;
}

/// Δ_ω: blocks H_b(ω)·m^Δ_{ab} for b − a = ω, zero elsewhere.
inline QMatrix alien_operator(const LocalizedPerv& f, const GaussRat& omega) {
  if (omega.is_zero()) throw Error(ErrorKind::DegenerateDirection, "alien operator needs a nonzero difference");
  QMatrix out(f.total_dim(), f.total_dim());
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (a == b || f.point(b) - f.point(a) != omega) continue;
      TransportEngine e(f, a, b);
      out.set_block(f.offset(b), f.offset(a), f.phi(b).junction(omega) * m_alien_direction(e, AlienMethod::SubsetSum));
    }
  return out;
}

inline QMatrix alien_sum_on_ray(const LocalizedPerv& f, const GaussRat& zeta) {
  QMatrix out(f.total_dim(), f.total_dim());
  for (const auto& w : differences_on_ray(f.config(), zeta)) out += alien_operator(f, w);
  return out;
}

inline QMatrix log_stokes(const LocalizedPerv& f, const GaussRat& zeta) {
  StokesData s = stokes_operator(f, zeta);
  return nilpotent_log(s.op, s.grading);
}

inline bool log_stokes_check(const LocalizedPerv& f, const GaussRat& zeta) {
  return log_stokes(f, zeta) == alien_sum_on_ray(f, zeta);
}

/// St^{F*G}_ζ against St^F_ζ ⊗ St^G_ζ under the Thom–Sebastiani permutation.
inline bool stokes_multiplicativity_check(const LocalizedPerv& f, const LocalizedPerv& g, const GaussRat& zeta) {
  const Convolution fg = convolve(f, g);
  const QMatrix p = thom_sebastiani_permutation(f, g, fg);
  return stokes_operator(fg.sheaf, zeta).op * p ==
         p * kron(stokes_operator(f, zeta).op, stokes_operator(g, zeta).op);
}

/// Δ^{F*G}_ω against Δ^F_ω ⊗ Id + Id ⊗ Δ^G_ω.
inline bool leibniz_check(const LocalizedPerv& f, const LocalizedPerv& g, const GaussRat& omega) {
  const Convolution fg = convolve(f, g);
  const QMatrix p = thom_sebastiani_permutation(f, g, fg);
  const QMatrix rhs = kron(alien_operator(f, omega), QMatrix::identity(g.total_dim())) +
                      kron(QMatrix::identity(f.total_dim()), alien_operator(g, omega));
  return alien_operator(fg.sheaf, omega) * p == p * rhs;
}

// Stokes filtration --------------------------------------------------------------------

struct FlagStep {
  std::vector<std::size_t> points;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // (offset, length) in ⊕_a Φ_a
  std::size_t dim = 0;
};

/// ⊕_{Re(a·conj ζ) ≥ −λ} Φ_a for a non-Stokes direction ζ.
inline FlagStep stokes_filtration(const LocalizedPerv& f, const GaussRat& zeta, const Rational& lambda) {
  if (zeta.is_zero()) throw Error(ErrorKind::DegenerateDirection, "filtration of the zero direction");
  if (is_stokes_direction(f.config(), zeta)) throw Error(ErrorKind::StokesDirection, zeta.pretty() + " is a Stokes direction");
  FlagStep step;
  for (std::size_t a = 0; a < f.size(); ++a)
    if (dot(f.point(a), zeta) >= -lambda) {
      step.points.push_back(a);
      step.spans.emplace_back(f.offset(a), f.dim(a));
      step.dim += f.dim(a);
    }
  return step;
}

/// The thresholds at which the filtration jumps, increasing.
inline std::vector<Rational> filtration_jumps(const LocalizedPerv& f, const GaussRat& zeta) {
  std::vector<Rational> out;
  for (const auto& p : f.config()) out.push_back(-dot(p, zeta));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline bool preserves(const FlagStep& step, const QMatrix& op) {
  std::vector<bool> inside(op.rows(), false);
  for (auto [off, len] : step.spans)
    for (std::size_t k = 0; k < len; ++k) inside[off + k] = true;
  for (std::size_t r = 0; r < op.rows(); ++r)
    for (std::size_t c = 0; c < op.cols(); ++c)
      if (inside[c] && !inside[r] && !op(r, c).is_zero()) return false;
  return true;
}

// Monodromy of the generic Fourier stalk -----------------------------------------------

/// Parallel transport of ⊕_a Φ_a turning counterclockwise from direction `from` to `to`
/// (both non-Stokes; equal directions mean a full turn): St_ζ at each Stokes direction
/// passed and diag(T_a) when passing angle 0.
inline QMatrix ft_transport(const LocalizedPerv& f, const GaussRat& from, const GaussRat& to) {
  for (const auto* z : {&from, &to})
    if (is_stokes_direction(f.config(), *z)) throw Error(ErrorKind::StokesDirection, z->pretty() + " is a Stokes direction");
  std::vector<QMatrix> monos;
  for (const auto& p : f.phis()) monos.push_back(p.monodromy());
  const QMatrix cut = block_diag(monos);
  // Events are Stokes directions; the cut sits just before arg 0 of the next sheet.
  const LiftedDirection start{from, 0};
  const LiftedDirection stop = counterclockwise_lift(from, to);
  QMatrix acc = QMatrix::identity(f.total_dim());
  const auto dirs = stokes_directions(f.config());
  for (long sheet = 0; sheet <= stop.winding; ++sheet) {
    if (sheet > 0) acc = cut * acc;
    for (const auto& z : dirs) {
      const bool after_start = sheet > 0 || direction_cmp(z, start.dir) > 0;
      const bool before_stop = sheet < stop.winding || direction_cmp(z, stop.dir) < 0;
      if (after_start && before_stop) acc = stokes_operator(f, z).op * acc;
    }
  }
  return acc;
}

inline QMatrix ft_monodromy(const LocalizedPerv& f, const GaussRat& base) { return ft_transport(f, base, base); }

}  // namespace perv

#endif  // PERV_STOKES_HPP
