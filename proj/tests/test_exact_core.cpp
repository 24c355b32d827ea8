#include <gtest/gtest.h>

#include "perv/matrix.hpp"
#include "support.hpp"

using namespace perv;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("6/4").str(), "3/2");
  EXPECT_EQ(Rational::parse("-7").str(), "-7/1");
  EXPECT_EQ(Rational::parse("0").str(), "0/1");
  EXPECT_THROW(Rational::parse("1/0"), Error);
  EXPECT_THROW(Rational::parse("1/-2"), Error);
  EXPECT_THROW(Rational::parse("x"), Error);
  EXPECT_THROW(Rational(1) / Rational(0), Error);
}

TEST(GaussRat, Arithmetic) {
  GaussRat a(1, 2), b(3, -1);
  EXPECT_EQ(a * b, GaussRat(5, 5));
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a.conj(), GaussRat(1, -2));
  EXPECT_EQ(GaussRat(1, 1).pretty(), "1+i");
  EXPECT_EQ(GaussRat(0, -2).pretty(), "-2i");
}

TEST(DirectionCmp, SpecExamples) {
  EXPECT_EQ(direction_cmp(GaussRat(1), GaussRat::i_unit()), std::strong_ordering::less);
  EXPECT_EQ(direction_cmp(GaussRat(2, 2), GaussRat(1, 1)), std::strong_ordering::equal);
  EXPECT_EQ(direction_cmp(GaussRat(-1), GaussRat(0, -1)), std::strong_ordering::less);
  EXPECT_TRUE(is_parallel_same_dir(GaussRat(1, 1), GaussRat(2, 2)));
  EXPECT_FALSE(is_parallel_same_dir(GaussRat(1, 1), GaussRat(-1, -1)));
  EXPECT_FALSE(is_parallel_same_dir(GaussRat(1), GaussRat(1, 1)));
  EXPECT_THROW(direction_cmp(GaussRat(0), GaussRat(1)), Error);
}

TEST(DirectionCmp, AgreesWithFloatingArgumentOnSeparatedInputs) {
  rnd::Gen g(11);
  for (int n = 0; n < 500; ++n) {
    GaussRat u = g.nonzero_gauss(), v = g.nonzero_gauss();
    auto arg = [](const GaussRat& z) {
      double t = std::atan2(z.im.to_double(), z.re.to_double());
      return t < 0 ? t + 2 * M_PI : t;
    };
    double du = arg(u), dv = arg(v);
    if (std::abs(du - dv) < 1e-9) {
      EXPECT_EQ(direction_cmp(u, v), std::strong_ordering::equal);
    } else {
      EXPECT_EQ(direction_cmp(u, v) < 0, du < dv) << u << " vs " << v;
    }
  }
}

TEST(DirectionCmp, PreorderAndScaling) {
  rnd::Gen g(12);
  for (int n = 0; n < 300; ++n) {
    GaussRat u = g.nonzero_gauss(), v = g.nonzero_gauss(), w = g.nonzero_gauss();
    Rational lambda(g.integer(1, 9), g.integer(1, 9));
    EXPECT_EQ(direction_cmp(u, v), direction_cmp(GaussRat(lambda) * u, v));
    if (direction_cmp(u, v) <= 0 && direction_cmp(v, w) <= 0) {
      EXPECT_TRUE(direction_cmp(u, w) <= 0);
    }
    EXPECT_TRUE(direction_cmp(u, v) == (0 <=> direction_cmp(v, u)));
  }
}

TEST(QMatrix, InverseExamples) {
  EXPECT_EQ(qmatrix_inverse(QMatrix::identity(2)), QMatrix::identity(2));
  EXPECT_EQ(qmatrix_inverse(QMatrix{{1, 1}, {0, 1}}), (QMatrix{{1, -1}, {0, 1}}));
  EXPECT_THROW(qmatrix_inverse(QMatrix(2, 2)), Error);
}

TEST(QMatrix, RandomInverse) {
  rnd::Gen g(13);
  for (int n = 0; n < 100; ++n) {
    std::size_t d = static_cast<std::size_t>(g.integer(1, 5));
    QMatrix m = g.invertible(d, 3);
    EXPECT_TRUE((m * qmatrix_inverse(m)).is_identity());
  }
}

TEST(QMatrix, ShapeChecks) {
  EXPECT_THROW(QMatrix(2, 3) * QMatrix(2, 3), Error);
  EXPECT_THROW(QMatrix(2, 3) + QMatrix(3, 2), Error);
}

TEST(QMatrix, KronAndDeterminant) {
  QMatrix a{{1, 2}, {3, 4}}, b{{0, 1}, {1, 0}};
  QMatrix k = kron(a, b);
  EXPECT_EQ(k, (QMatrix{{0, 1, 0, 2}, {1, 0, 2, 0}, {0, 3, 0, 4}, {3, 0, 4, 0}}));
  EXPECT_EQ(determinant(k), determinant(a) * determinant(a) * determinant(b) * determinant(b));
  EXPECT_EQ(charpoly(QMatrix{{0, -1}, {1, -1}}), (std::vector<Rational>{1, 1, 1}));
}

TEST(NilpotentLog, SpecExamples) {
  EXPECT_TRUE(nilpotent_log(QMatrix::identity(3)).is_zero());
  Rational c(5, 7);
  EXPECT_EQ(nilpotent_log(QMatrix{{1, c}, {0, 1}}), (QMatrix{{0, c}, {0, 0}}));
  EXPECT_EQ(nilpotent_log(QMatrix{{1, 1, 1}, {0, 1, 1}, {0, 0, 1}}),
            (QMatrix{{0, 1, Rational(1, 2)}, {0, 0, 1}, {0, 0, 0}}));
  EXPECT_THROW(nilpotent_log(QMatrix{{2, 0}, {0, 1}}), Error);
  EXPECT_THROW(nilpotent_log(QMatrix{{1, 0}, {1, 1}}, Grading{1, 0}), Error);
}

TEST(NilpotentLog, ExpRoundTripAndAdditivity) {
  rnd::Gen g(14);
  for (int n = 0; n < 60; ++n) {
    std::size_t d = static_cast<std::size_t>(g.integer(1, 5));
    QMatrix m = g.unipotent(d);
    Grading grading(d);
    for (std::size_t k = 0; k < d; ++k) grading[k] = -static_cast<int>(k);
    QMatrix l = nilpotent_log(m, grading);
    EXPECT_EQ(nilpotent_exp(l), m);
    long p = g.integer(1, 3), q = g.integer(1, 3);
    EXPECT_EQ(nilpotent_log(power(m, p) * power(m, q)), nilpotent_log(power(m, p)) + nilpotent_log(power(m, q)));
  }
}
