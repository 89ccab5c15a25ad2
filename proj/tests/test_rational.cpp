#include "poskb/errors.hpp"
#include "poskb/rational.hpp"

#include "doctest.h"

#include <random>

using namespace poskb;

TEST_SUITE("rational") {
  TEST_CASE("parses integers, decimals and fractions") {
    CHECK(parse_rational("1") == Rational(1));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(parse_rational("0.9375") == Rational(15, 16));
    CHECK(parse_rational("15/16") == Rational(15, 16));
    CHECK(parse_rational(" 3/4 ") == Rational(3, 4));
    CHECK(parse_rational("0.8") == Rational(4, 5));
    CHECK(parse_rational("2/6") == Rational(1, 3));
    CHECK(parse_rational("-0.5") == Rational(-1, 2));
  }

  TEST_CASE("rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), InvalidWeightError);
    CHECK_THROWS_AS(parse_rational("abc"), InvalidWeightError);
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidWeightError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), InvalidWeightError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), InvalidWeightError);
    CHECK_THROWS_AS(parse_rational("0x10"), InvalidWeightError);
  }

  TEST_CASE("formats exact decimals when the denominator is 2^a * 5^b") {
    CHECK(format_rational(Rational(15, 16)) == "0.9375");
    CHECK(format_rational(Rational(13, 16)) == "0.8125");
    CHECK(format_rational(Rational(1)) == "1");
    CHECK(format_rational(Rational(0)) == "0");
    CHECK(format_rational(Rational(1, 4)) == "0.25");
    CHECK(format_rational(Rational(4, 5)) == "0.8");
    CHECK(format_rational(Rational(1, 3)) == "1/3");
    CHECK(format_rational(Rational(7, 12)) == "7/12");
    CHECK(format_rational(Rational(1, 10)) == "0.1");
    CHECK(format_rational(Rational(-3, 8)) == "-0.375");
  }

  TEST_CASE("fraction and percent forms") {
    CHECK(format_fraction(Rational(1, 4)) == "1/4");
    CHECK(format_fraction(Rational(2)) == "2");
    CHECK(format_fraction(Rational(6, 8)) == "3/4");
    CHECK(format_percent(Rational(1, 4)) == "25%");
    CHECK(format_percent(Rational(1)) == "100%");
    CHECK(format_percent(Rational(1, 3)) == "100/3%");
    CHECK(format_percent(Rational(5, 8)) == "62.5%");
  }

  TEST_CASE("format and parse round-trip on random rationals") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(0, 400), den(1, 400);
    for (int i = 0; i < 2000; ++i) {
      Rational r(num(rng), den(rng));
      CHECK(parse_rational(format_rational(r)) == r);
      CHECK(parse_rational(format_fraction(r)) == r);
    }
  }

  TEST_CASE("pow2") {
    CHECK(pow2(0) == 1);
    CHECK(pow2(10) == 1024);
    CHECK(pow2(70) == BigInt(1024) * BigInt(1024) * BigInt(1024) * BigInt(1024) * BigInt(1024) *
                          BigInt(1024) * BigInt(1024));
  }
}
