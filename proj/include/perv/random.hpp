// Seeded generators for randomized check suites and tests.
#ifndef PERV_RANDOM_HPP
#define PERV_RANDOM_HPP

#include <random>
#include <vector>

#include "perv/sheaf.hpp"

namespace perv::rnd {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1)); }

  Rational rational(long range = 4, long max_den = 3) {
    return Rational(integer(-range, range), integer(1, max_den));
  }

  QMatrix matrix(std::size_t rows, std::size_t cols, long range = 3, long max_den = 2) {
    QMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational(range, max_den);
    return m;
  }

  QMatrix invertible(std::size_t n, long range = 2) {
    for (;;) {
      QMatrix m = matrix(n, n, range, 1);
      if (is_invertible(m)) return m;
    }
  }

  /// Identity plus random strictly upper-triangular part.
  QMatrix unipotent(std::size_t n) {
    QMatrix m = QMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) m(r, c) = rational(3, 2);
    return m;
  }

  GaussRat gauss(long range = 4) { return {Rational(integer(-range, range)), Rational(integer(-range, range))}; }

  GaussRat nonzero_gauss(long range = 4) {
    for (;;) {
      GaussRat z = gauss(range);
      if (!z.is_zero()) return z;
    }
  }

  /// Non-horizontal direction with small Gaussian-integer coordinates.
  GaussRat slanted_direction(long range = 3) {
    for (;;) {
      GaussRat z = gauss(range);
      if (z.im.sign() != 0) return z;
    }
  }

  /// `on_line` points at consecutive lattice steps along a random non-horizontal line,
  /// plus `extra` random points, with no horizontal pair overall.
  Configuration collinear_config(std::size_t on_line, std::size_t extra = 0) {
    for (;;) {
      std::vector<GaussRat> pts;
      const GaussRat base = gauss(2);
      const GaussRat dir = slanted_direction(2);
      long t = 0;
      for (std::size_t k = 0; k < on_line; ++k) {
        t += integer(1, 2);
        pts.push_back(base + dir * GaussRat(t));
      }
      for (std::size_t k = 0; k < extra; ++k) pts.push_back(gauss(6));
      if (ok(pts)) return Configuration(pts);
    }
  }

  /// Points base + t·dir for distinct small integers t, plus `extra` random points.
  Configuration line_config(const GaussRat& dir, std::size_t on_line, std::size_t extra = 0) {
    for (;;) {
      std::vector<GaussRat> pts;
      const GaussRat base = gauss(2);
      long t = integer(-1, 1);
      for (std::size_t k = 0; k < on_line; ++k) {
        pts.push_back(base + dir * GaussRat(t));
        t += integer(1, 2);
      }
      for (std::size_t k = 0; k < extra; ++k) pts.push_back(gauss(5));
      if (ok(pts)) return Configuration(pts);
    }
  }

  Configuration generic_config(std::size_t n) {
    for (;;) {
      std::vector<GaussRat> pts;
      for (std::size_t k = 0; k < n; ++k) pts.push_back(gauss(6));
      if (ok(pts) && is_general_position(Configuration(pts))) return Configuration(pts);
    }
  }

  /// Random object on a configuration. `monodromy` selects trivial (0), unipotent (1)
  /// or general invertible (2) local systems.
  LocalizedPerv object(const Configuration& cfg, std::size_t max_dim, int monodromy = 2) {
    std::vector<CircleLocalSystem> phi;
    for (std::size_t k = 0; k < cfg.size(); ++k) {
      const std::size_t d = static_cast<std::size_t>(integer(1, static_cast<long>(max_dim)));
      if (monodromy == 0) phi.push_back(CircleLocalSystem::trivial(d));
      else if (monodromy == 1) phi.emplace_back(unipotent(d));
      else phi.emplace_back(invertible(d));
    }
    return object(cfg, phi);
  }

  LocalizedPerv object(const Configuration& cfg, const std::vector<CircleLocalSystem>& phi) {
    const std::size_t n = cfg.size();
    std::vector<QMatrix> mplus(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        mplus[i * n + j] = i == j ? QMatrix(phi[i].dim(), phi[i].dim()) : matrix(phi[j].dim(), phi[i].dim());
    return LocalizedPerv(cfg, phi, std::move(mplus));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  static bool ok(const std::vector<GaussRat>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (pts[i] == pts[j] || pts[i].im == pts[j].im) return false;
    return true;
  }

  std::mt19937_64 rng_;
};

}  // namespace perv::rnd

#endif  // PERV_RANDOM_HPP
