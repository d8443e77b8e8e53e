#include "sumdens/rational.hpp"

#include <gtest/gtest.h>

using namespace sumdens;

TEST(Rational, FormatsAlwaysAsFraction) {
  EXPECT_EQ(to_string(Rational(1)), "1/1");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(to_string(Rational(6, 8)), "3/4");
  EXPECT_EQ(to_string(Rational(-1, 3)), "-1/3");
}

TEST(Rational, ParsesFractionsIntegersAndDecimalsExactly) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("2/2"), Rational(1));
  EXPECT_EQ(parse_rational("9/10"), Rational(9, 10));
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("0.333"), Rational(333, 1000));
  EXPECT_EQ(parse_rational("1"), Rational(1));
  EXPECT_EQ(parse_rational("0"), Rational(0));
  EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
}

TEST(Rational, RejectsMalformedInput) {
  for (const char* bad : {"", "/", "1/", "/2", "1/0", "a", "0.1.2", "1//2", " 1/2", "1e-3", "0x10", "."})
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
}

TEST(Rational, RoundTripsThroughStrings) {
  for (const Rational& q : {Rational(1, 3), Rational(10081, 20160), Rational(0), Rational(1), Rational(7, 5040)})
    EXPECT_EQ(parse_rational(to_string(q)), q);
}

TEST(Integer, FactorialAndHelpers) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(1), 1);
  EXPECT_EQ(factorial(6), 720);
  EXPECT_EQ(factorial(11), 39916800);
  EXPECT_EQ(factorial(25).str(), "15511210043330985984000000");
  EXPECT_EQ(mod_floor(Integer(-1), Integer(6)), 5);
  EXPECT_EQ(mod_floor(Integer(13), Integer(6)), 1);
  EXPECT_EQ(lcm(Integer(4), Integer(6)), 12);
  EXPECT_TRUE(fits_u64(Integer(~std::uint64_t{0})));
  EXPECT_FALSE(fits_u64(Integer(~std::uint64_t{0}) + 1));
  EXPECT_THROW(to_u64(Integer(-1)), std::overflow_error);
  EXPECT_EQ(parse_integer("123456789012345678901234567890").str(), "123456789012345678901234567890");
  EXPECT_THROW(parse_integer("12a"), std::invalid_argument);
}
