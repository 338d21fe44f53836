#include "rentbound/rational.hpp"

#include <gtest/gtest.h>

using namespace rentbound;

TEST(Rational, ParsesDecimals) {
  EXPECT_EQ(parse_decimal("-3.5"), Rational(-7, 2));
  EXPECT_EQ(parse_decimal("+10"), Rational(10));
  EXPECT_EQ(parse_decimal("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_decimal("12,5", ".,"), Rational(25, 2));
}

TEST(Rational, RejectsJunk) {
  for (const char* bad : {"", "-", ".5", "5.", "1e3", "1.2.3", " 1", "1 ", "0x10", "12,5"}) {
    EXPECT_FALSE(try_parse_decimal(bad)) << bad;
  }
  EXPECT_THROW(parse_decimal("abc"), std::invalid_argument);
}

TEST(Rational, Formatting) {
  EXPECT_EQ(to_exact_string(Rational(-7, 2)), "-7/2");
  EXPECT_EQ(to_exact_string(Rational(4)), "4");
  EXPECT_EQ(to_decimal_string(Rational(-7, 2)), "-3.5");
  EXPECT_EQ(to_decimal_string(Rational(1, 3)), std::nullopt);
  EXPECT_EQ(format_fixed(Rational(70560, 100), 2), "705.60");
  EXPECT_EQ(format_fixed(Rational(1, 200), 2), "0.01");
  EXPECT_EQ(format_fixed(Rational(-1, 200), 2), "-0.01");
  EXPECT_EQ(format_fixed(Rational(-1, 1000), 2), "0.00");
  EXPECT_EQ(format_fixed(Rational(25, 2), 1, ','), "12,5");
  EXPECT_EQ(format_fixed(Rational(7), 0), "7");
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(floor(Rational(-7, 2)), -4);
  EXPECT_EQ(ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(floor(Rational(7, 2)), 3);
  EXPECT_EQ(ceil(Rational(3)), 3);
  EXPECT_TRUE(is_integer(Rational(6, 3)));
  EXPECT_FALSE(is_integer(Rational(1, 3)));
}
