#include <gtest/gtest.h>

#include "bnhard/dyadic.hpp"

namespace bnhard {
namespace {

TEST(Dyadic, Normalizes) {
  DyadicRational a(BigInt(6), 3);  // 6/8 = 3/4
  EXPECT_EQ(a.numerator(), 3);
  EXPECT_EQ(a.log2_denominator(), 2u);
  DyadicRational zero(BigInt(0), 7);
  EXPECT_EQ(zero.log2_denominator(), 0u);
  EXPECT_EQ(DyadicRational(BigInt(8), 3), DyadicRational(1));
}

TEST(Dyadic, Arithmetic) {
  const DyadicRational sixteenth(BigInt(1), 4);
  EXPECT_EQ(DyadicRational(1) - sixteenth, DyadicRational(BigInt(15), 4));
  EXPECT_EQ(sixteenth * sixteenth, DyadicRational(BigInt(1), 8));
  EXPECT_EQ(sixteenth + sixteenth, DyadicRational(BigInt(1), 3));
  EXPECT_EQ((DyadicRational(1) - DyadicRational(BigInt(1), 7)).scaled(-3), DyadicRational(BigInt(127), 10));
  EXPECT_EQ(DyadicRational(BigInt(3), 2).scaled(2), DyadicRational(3));
  EXPECT_LT(sixteenth, DyadicRational(BigInt(1), 3));
  EXPECT_GT(DyadicRational(-1), DyadicRational(-2));
}

TEST(Dyadic, TextRoundTrip) {
  EXPECT_EQ(to_string(DyadicRational(BigInt(127), 10)), "127/1024");
  EXPECT_EQ(to_string(DyadicRational(0)), "0/1");
  EXPECT_EQ(to_string(DyadicRational(1)), "1/1");
  EXPECT_EQ(parse_dyadic("127/1024"), DyadicRational(BigInt(127), 10));
  EXPECT_EQ(parse_dyadic("2/4"), DyadicRational(BigInt(1), 1));
  EXPECT_EQ(parse_dyadic("3"), DyadicRational(3));
  EXPECT_EQ(parse_dyadic("-5/8"), DyadicRational(BigInt(-5), 3));
  EXPECT_THROW(parse_dyadic("1/3"), InvalidArgument);
  EXPECT_THROW(parse_dyadic("1/0"), InvalidArgument);
  EXPECT_THROW(parse_dyadic("x/2"), InvalidArgument);
  EXPECT_THROW(parse_dyadic(""), InvalidArgument);
  const DyadicRational big(BigInt("123456789012345678901234567890"), 77);
  EXPECT_EQ(parse_dyadic(to_string(big)), big);
}

TEST(Dyadic, PowersOfTwo) {
  EXPECT_EQ(DyadicRational::two_to(-4, 1), DyadicRational(BigInt(1), 4));
  EXPECT_EQ(DyadicRational::two_to(-12, 2), DyadicRational(BigInt(1), 6));
  EXPECT_EQ(DyadicRational::two_to(-28, 4), DyadicRational(BigInt(1), 7));
  EXPECT_EQ(DyadicRational::two_to(3, 1), DyadicRational(8));
  EXPECT_THROW(DyadicRational::two_to(-1, 2), InvalidArgument);
  EXPECT_NEAR(to_double(DyadicRational(BigInt(127), 10)), 127.0 / 1024.0, 1e-15);
}

TEST(Quartic, RootArithmetic) {
  const QuarticInt r = QuarticInt::root_power(1);
  EXPECT_EQ(r * r * r * r, QuarticInt(2));
  const QuarticInt r3 = QuarticInt::root_power(3);
  EXPECT_EQ(r * r3, QuarticInt(2));
  EXPECT_EQ(r3 * r3, QuarticInt(2) * QuarticInt::root_power(2));
  EXPECT_EQ((QuarticInt(1) + r) * (QuarticInt(1) - r), QuarticInt(1) - QuarticInt::root_power(2));
}

TEST(Quartic, DyadicPowers) {
  // 2^(-15/8) is not in the ring; 2^(-15/4) is r / 16.
  EXPECT_THROW(QuarticDyadic::two_to(-15, 8), InvalidArgument);
  const auto v = QuarticDyadic::two_to(-15, 4);
  EXPECT_EQ(v.numerator(), QuarticInt::root_power(1));
  EXPECT_EQ(v.log2_denominator(), 4u);
  // (2^(-15/4))^4 = 2^-15.
  EXPECT_EQ(v * v * v * v, QuarticDyadic(QuarticInt(1), 15));
  // Normalization looks at every coefficient.
  QuarticInt even = QuarticInt(2) + QuarticInt(4) * QuarticInt::root_power(2);
  const QuarticDyadic reduced(even, 3);
  EXPECT_EQ(reduced.log2_denominator(), 2u);
  EXPECT_EQ(reduced.numerator(), QuarticInt(1) + QuarticInt(2) * QuarticInt::root_power(2));
}

}  // namespace
}  // namespace bnhard
