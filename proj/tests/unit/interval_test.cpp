#include "rentbound/interval.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rentbound;

namespace {
Interval iv(long long lo, long long hi) { return Interval(Rational(lo), Rational(hi)); }
}  // namespace

TEST(Interval, RejectsInverted) { EXPECT_THROW(iv(3, 2), std::invalid_argument); }

TEST(Interval, Intersect) {
  EXPECT_EQ(intersect(iv(2, 3), iv(1, 2)), iv(2, 2));
  EXPECT_EQ(intersect(iv(0, 1), iv(0, 1)), iv(0, 1));
  EXPECT_EQ(intersect(iv(0, 1), iv(2, 3)), std::nullopt);
  EXPECT_TRUE(overlaps(iv(0, 1), iv(1, 5)));
  EXPECT_FALSE(overlaps(iv(0, 1), iv(2, 5)));
}

TEST(Interval, Arithmetic) {
  EXPECT_EQ(iv(1, 2) + iv(10, 20), iv(11, 22));
  EXPECT_EQ(iv(-1, 3) * iv(2, 2), iv(-2, 6));
  EXPECT_EQ(iv(-2, 3) * iv(-4, 1), iv(-12, 8));
  EXPECT_EQ(scale(Rational(-1), iv(1, 2)), iv(-2, -1));
  EXPECT_EQ(hull(iv(1, 2), iv(5, 6)), iv(1, 6));
  EXPECT_EQ(to_string(Interval(Rational(-7, 2), Rational(18))), "[-7/2, 18]");
}

TEST(Interval, Contains) {
  EXPECT_TRUE(iv(1, 5).contains(Rational(5)));
  EXPECT_FALSE(iv(1, 5).contains(Rational(6)));
  EXPECT_TRUE(iv(1, 5).contains(iv(2, 3)));
  EXPECT_FALSE(iv(1, 5).contains(iv(0, 3)));
  EXPECT_TRUE(Interval::point(Rational(4)).is_singleton());
  EXPECT_EQ(iv(2, 9).width(), 7);
}

TEST(Interval, ProductMatchesPointwiseExtremes) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int n = 0; n < 300; ++n) {
    int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (a > b) std::swap(a, b);
    if (c > e) std::swap(c, e);
    long long lo = 1000, hi = -1000;
    for (int x = a; x <= b; ++x) {
      for (int y = c; y <= e; ++y) {
        lo = std::min<long long>(lo, x * y);
        hi = std::max<long long>(hi, x * y);
      }
    }
    EXPECT_EQ(iv(a, b) * iv(c, e), iv(lo, hi));
  }
}
