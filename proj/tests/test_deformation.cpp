#include <gtest/gtest.h>

#include "perv/deformation.hpp"
#include "perv/stokes.hpp"
#include "support.hpp"

using namespace perv;

namespace {
GaussRat g(long re, long im = 0) { return GaussRat(re, im); }

/// Random small displacement accepted by certify.
Perturbation small_move(rnd::Gen& gen, const Configuration& cfg) {
  for (;;) {
    std::vector<GaussRat> d;
    for (std::size_t k = 0; k < cfg.size(); ++k) d.push_back(gen.gauss(3) * GaussRat(Rational(1, 200)));
    try {
      return certify(cfg, d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidPerturbation) throw;
    }
  }
}

/// Whether direction b stays away from every difference p_j(t) − p_i(t), t ∈ [0, 1].
bool base_stays_clear(const Configuration& cfg, const std::vector<GaussRat>& d, const GaussRat& b) {
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = 0; j < cfg.size(); ++j) {
      if (i == j) continue;
      const GaussRat u0 = cfg[j] - cfg[i], u1 = d[j] - d[i];
      const Rational c0 = cross(u0, b), c1 = cross(u1, b);
      if (c1.is_zero()) {
        if (c0.is_zero() && dot(u0, b).sign() > 0) return false;
        continue;
      }
      const Rational t = -c0 / c1;
      if (t.sign() >= 0 && t <= Rational(1) && dot(u0 + u1 * GaussRat(t), b).sign() > 0) return false;
    }
  return true;
}
}  // namespace

TEST(Certify, QuadraticRootDetection) {
  using detail::quadratic_root_in_unit;
  EXPECT_TRUE(quadratic_root_in_unit(Rational(1), Rational(-1), Rational(0), false));   // t(t-1)
  EXPECT_FALSE(quadratic_root_in_unit(Rational(1), Rational(1), Rational(0), false));   // t(t+1)
  EXPECT_TRUE(quadratic_root_in_unit(Rational(1), Rational(1), Rational(0), true));
  EXPECT_TRUE(quadratic_root_in_unit(Rational(4), Rational(-4), Rational(1), false));   // (2t-1)²
  EXPECT_FALSE(quadratic_root_in_unit(Rational(4), Rational(-4), Rational(2), false));
  EXPECT_TRUE(quadratic_root_in_unit(Rational(16), Rational(-10), Rational(1), false));  // roots 1/8, 1/2
  EXPECT_TRUE(quadratic_root_in_unit(Rational(1), Rational(-3), Rational(2), false));  // roots 1, 2
  EXPECT_FALSE(quadratic_root_in_unit(Rational(0), Rational(1), Rational(-2), false));
  EXPECT_FALSE(quadratic_root_in_unit(Rational(1), Rational(-3), Rational(0), false));  // t(t-3)
}

TEST(Certify, SideWords) {
  // 0, 1+i, 2+2i with the middle point pushed up-left: it lies left of 0 → 2+2i.
  Configuration cfg({g(0), g(1, 1), g(2, 2)});
  Perturbation p = certify(cfg, {g(0), GaussRat(Rational(-1, 10), Rational(1, 10)), g(0)});
  ASSERT_EQ(p.sides.size(), 2u);
  EXPECT_EQ(p.sides[0], (SideAssignment{0, 2, "-"}));
  EXPECT_EQ(p.sides[1], (SideAssignment{2, 0, "+"}));
  EXPECT_TRUE(certify(Configuration({g(0), g(1, 1), g(3, 2)}), {g(0), g(0), g(0)}).sides.empty());
}

TEST(Certify, Rejections) {
  Configuration cfg({g(0), g(1, 1), g(2, 2)});
  // Horizontal pair created.
  EXPECT_THROW(certify(cfg, {g(0), g(0, -1), g(0)}), Error);
  // Stays collinear.
  EXPECT_THROW(certify(cfg, {g(0), g(0), g(0)}), Error);
  // A point sweeps across the segment of two others without any horizontal event.
  Configuration tri({g(0), g(1, 4), g(3, 2)});
  try {
    certify(tri, {g(0), g(0), g(-4)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPerturbation);
  }
  EXPECT_THROW(certify(cfg, {g(0)}), Error);
}

TEST(Perturb, GenericTinyMoveKeepsData) {
  rnd::Gen gen(81);
  for (int n = 0; n < 20; ++n) {
    LocalizedPerv f = gen.object(gen.generic_config(4), 2);
    Perturbation p = small_move(gen, f.config());
    EXPECT_TRUE(p.sides.empty());
    LocalizedPerv h = perturb(f, p);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        if (i != j) {
          EXPECT_EQ(h.based(i, j), f.based(i, j));
        }
  }
}

TEST(Perturb, SpecializeRoundTrip) {
  rnd::Gen gen(82);
  for (int n = 0; n < 40; ++n) {
    LocalizedPerv f = gen.object(gen.collinear_config(static_cast<std::size_t>(gen.integer(3, 5))), 2);
    Perturbation p = small_move(gen, f.config());
    EXPECT_FALSE(p.sides.empty());
    LocalizedPerv h = perturb(f, p);
    EXPECT_TRUE(is_general_position(h.config()));
    EXPECT_EQ(specialize(h, f.config(), p), f);
  }
}

TEST(Perturb, SpecializeGenericTargetIsIdentity) {
  rnd::Gen gen(83);
  LocalizedPerv f = gen.object(gen.generic_config(3), 2);
  std::vector<GaussRat> zero(3, g(0));
  Perturbation p = certify(f.config(), zero);
  EXPECT_EQ(specialize(f, f.config(), p), f);
}

TEST(Perturb, CertificateMismatchRejected) {
  rnd::Gen gen(84);
  LocalizedPerv f = gen.object(gen.collinear_config(3), 1);
  Perturbation p = small_move(gen, f.config());
  Perturbation bad = p;
  for (auto& s : bad.sides) s.word[0] = s.word[0] == '+' ? '-' : '+';
  EXPECT_THROW(perturb(f, bad), Error);
  LocalizedPerv h = perturb(f, p);
  EXPECT_THROW(specialize(h, f.config(), bad), Error);
  EXPECT_THROW(specialize(h, Configuration({g(9, 1), g(8, 3), g(7, 7)}), p), Error);
}

TEST(Perturb, AlienTransportInvariance) {
  rnd::Gen gen(85);
  for (int n = 0; n < 30; ++n) {
    LocalizedPerv f = gen.object(gen.collinear_config(static_cast<std::size_t>(gen.integer(3, 5)), 1), 2);
    Perturbation p = small_move(gen, f.config());
    LocalizedPerv h = perturb(f, p);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        if (i != j) {
          EXPECT_EQ(alien_from_perturbed(h, f.config(), p, i, j), m_alien(f, i, j));
        }
  }
}

// The deformation is isomonodromic: the generic Fourier stalk's monodromy is unchanged
// when the base direction is never a Stokes direction during the move. This pins down
// which side each avoidance word refers to.
TEST(Perturb, FourierMonodromyUnchanged) {
  rnd::Gen gen(86);
  const std::vector<GaussRat> bases{g(7, 3), g(-5, 2), g(3, -8), g(-2, -9), g(11, 1), g(1, 13), g(-13, 1), g(1, -12)};
  int checked = 0;
  for (int n = 0; n < 30; ++n) {
    LocalizedPerv f = gen.object(gen.collinear_config(static_cast<std::size_t>(gen.integer(3, 4)), 1), 2);
    Perturbation p = small_move(gen, f.config());
    LocalizedPerv h = perturb(f, p);
    for (const auto& b : bases) {
      if (!base_stays_clear(f.config(), p.displacements, b)) continue;
      EXPECT_EQ(ft_monodromy(h, b), ft_monodromy(f, b));
      ++checked;
      break;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Perturb, OppositeSidesCancel) {
  rnd::Gen gen(87);
  for (int n = 0; n < 20; ++n) {
    LocalizedPerv f = gen.object(gen.collinear_config(static_cast<std::size_t>(gen.integer(3, 4))), 2);
    Perturbation p = small_move(gen, f.config());
    std::vector<GaussRat> back;
    for (const auto& d : p.displacements) back.push_back(-d);
    Perturbation q;
    try {
      q = certify(f.config(), back);
    } catch (const Error&) {
      continue;
    }
    // Cross from one side to the other through the collinear configuration and return.
    LocalizedPerv one = perturb(f, p);
    LocalizedPerv other = perturb(specialize(one, f.config(), p), q);
    EXPECT_EQ(perturb(specialize(other, f.config(), q), p), one);
  }
}

TEST(Drag, Loops) {
  rnd::Gen gen(88);
  LocalizedPerv f = gen.object(Configuration({g(0), g(5, 1), g(2, 4)}), 2);
  EXPECT_TRUE(drag_check(f, 1, {g(5, 1)}));
  EXPECT_TRUE(drag_check(f, 1, {g(5, 1), g(6, 2), GaussRat(Rational(11, 2), Rational(5, 2))}));
  try {
    drag_check(f, 2, {g(2, 4), g(2, -1), g(3, 4)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EventOnPath);
  }
  EXPECT_THROW(drag_check(f, 0, {g(1, 1)}), Error);
}
