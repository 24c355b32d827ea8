#include <gtest/gtest.h>

#include "perv/lefschetz.hpp"
#include "support.hpp"

using namespace perv;

namespace {
std::vector<Rational> poly(std::initializer_list<long> c) {
  std::vector<Rational> out;
  for (long x : c) out.push_back(Rational(x));
  return out;
}

/// (t^d − 1)/(t − 1), highest degree first.
std::vector<Rational> cyclotomic_sum(std::size_t d) { return std::vector<Rational>(d, Rational(1)); }
}  // namespace

TEST(ExactPoly, GcdAndSquarefree) {
  // (x − 1)²(x + 2) = x³ − 3x + 2
  EXPECT_FALSE(qpoly::is_squarefree(poly({1, 0, -3, 2})));
  EXPECT_TRUE(qpoly::is_squarefree(poly({1, 0, -3, 0})));
  EXPECT_EQ(qpoly::gcd(poly({1, 0, -1}), poly({1, -2, 1})), poly({1, -1}));
  EXPECT_EQ(qpoly::derivative(poly({2, 0, -3, 7})), poly({6, 0, -3}));
}

TEST(Lefschetz, Degenerate) {
  for (const auto& p : {poly({1, 0, 0, 0}), poly({1, 0, -2, 0, 0}), poly({1, 0}), poly({0, 1, 0})}) {
    try {
      lefschetz_sheaf(p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateFunction);
    }
  }
}

TEST(Lefschetz, Quadratic) {
  auto r = lefschetz_sheaf(poly({1, 0, 0}));
  ASSERT_EQ(r.sheaf.size(), 1u);
  EXPECT_EQ(r.sheaf.phi(0).monodromy(), (QMatrix{{-1}}));
}

TEST(Lefschetz, Cubic) {
  auto r = lefschetz_sheaf(poly({1, 0, -3, 0}));
  ASSERT_EQ(r.sheaf.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(r.sheaf.phi(k).monodromy(), (QMatrix{{-1}}));
  EXPECT_EQ(abs(r.sheaf.based(0, 1)(0, 0)), Rational(1));
  EXPECT_EQ(abs(r.sheaf.based(1, 0)(0, 0)), Rational(1));
  EXPECT_EQ(lefschetz_sheaf(poly({1, 0, -3, 0}), 100).sheaf, r.sheaf);
  EXPECT_EQ(charpoly(monodromy_at_infinity(poly({1, 0, -3, 0}))), cyclotomic_sum(3));
}

TEST(Lefschetz, MonodromyAtInfinityIsCycle) {
  for (const auto& p : {poly({1, 0, 0}), poly({2, 0, -6, 0}), poly({1, 0, 1, 1, 0}), poly({1, 0, 0, 0, -5, 1})}) {
    const QMatrix m = monodromy_at_infinity(p);
    EXPECT_EQ(charpoly(m), cyclotomic_sum(p.size() - 1));
  }
}

TEST(Lefschetz, GlobalConsistency) {
  // Generic, rotated conjugate pairs, and all-real values lying on one line.
  for (const auto& p : {poly({1, 0, -3, 0}), poly({1, 1, 0, -1, 1}), poly({1, 0, 0, 0, -5, 1}), poly({1, 0, -4, 1, 0}),
                        poly({1, 0, -5, 0, 4, 0}), poly({1, 2, -3, 1, 7, -2})}) {
    const auto r = lefschetz_sheaf(p);
    const auto c = global_consistency(r.sheaf, p);
    EXPECT_TRUE(c.consistent) << r.report.rotation;
    EXPECT_EQ(c.gluing_charpoly, cyclotomic_sum(p.size() - 1));
  }
}

TEST(Lefschetz, RandomPolynomials) {
  rnd::Gen gen(91);
  int checked = 0;
  while (checked < 12) {
    const auto d = static_cast<std::size_t>(gen.integer(2, 5));
    std::vector<Rational> p{Rational(gen.integer(1, 3))};
    for (std::size_t k = 0; k < d; ++k) p.push_back(Rational(gen.integer(-4, 4)));
    try {
      detail::require_morse(p);
    } catch (const Error&) {
      continue;
    }
    const auto r = lefschetz_sheaf(p);
    EXPECT_EQ(r.sheaf.size(), d - 1);
    for (std::size_t a = 0; a < r.sheaf.size(); ++a) {
      EXPECT_EQ(r.sheaf.phi(a).monodromy(), (QMatrix{{-1}}));
      for (std::size_t b = 0; b < r.sheaf.size(); ++b) EXPECT_LE(abs(r.report.transports(a, b)), Rational(2));
    }
    EXPECT_TRUE(global_consistency(r.sheaf, p).consistent);
    ++checked;
  }
}

TEST(Lefschetz, RotationRecorded) {
  // Real critical values would form horizontal pairs; the object is built for a rotation.
  const auto r = lefschetz_sheaf(poly({1, 0, -3, 0}));
  EXPECT_NE(r.report.rotation.im, Rational(0));
  ASSERT_EQ(r.report.critical_values.size(), 2u);
  EXPECT_EQ(r.report.critical_values[0].surrogate, r.sheaf.point(0));
}

// The stored data are m⁺; the engine derives every other avoidance transport from them.
// Continuing along the opposite detours must reproduce the engine's m⁻.
TEST(Lefschetz, LeftDetoursMatchDerivedMinus) {
  for (const auto& p : {poly({1, 0, -5, 0, 4, 0}), poly({1, 0, -4, 1, 0}), poly({1, 0, -9, 0, 20, 3, 0})}) {
    const auto r = lefschetz_sheaf(p);
    const std::size_t n = r.sheaf.size();
    std::vector<Word> minus(n * n);
    bool any = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) {
          minus[a * n + b] = Word(intermediate_indices(r.sheaf.config(), a, b).size(), '-');
          any = any || !minus[a * n + b].empty();
        }
    ASSERT_TRUE(any);
    const QMatrix direct = lefschetz_transports(p, minus);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) {
          EXPECT_EQ(direct(a, b), m_minus(r.sheaf, a, b)(0, 0)) << a << "->" << b;
        }
  }
}
