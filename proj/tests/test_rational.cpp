#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "valdist/errors.hpp"
#include "valdist/rational.hpp"

using namespace valdist;

TEST_CASE("p-power denominator recognition") {
  CHECK(has_p_power_denominator(Rational(1, 8), 2));
  CHECK(has_p_power_denominator(Rational(5), 2));
  CHECK(has_p_power_denominator(Rational(-3, 9), 3));
  CHECK_FALSE(has_p_power_denominator(Rational(1, 6), 2));
  CHECK_FALSE(has_p_power_denominator(Rational(1, 3), 2));
  CHECK(has_p_power_denominator(Rational(0), 5));
}

TEST_CASE("denominator level") {
  CHECK(p_denominator_level(Rational(1), 2) == 0);
  CHECK(p_denominator_level(Rational(3, 4), 2) == 2);
  CHECK(p_denominator_level(Rational(-1, 27), 3) == 3);
  CHECK(p_denominator_level(Rational(6, 2), 5) == 0);
}

TEST_CASE("p-adic valuation") {
  CHECK(p_adic_valuation(Rational(12), 2) == 2);
  CHECK(p_adic_valuation(Rational(12), 3) == 1);
  CHECK(p_adic_valuation(Rational(1, 4), 2) == -2);
  CHECK(p_adic_valuation(Rational(9, 8), 2) == -3);
  CHECK(p_adic_valuation(Rational(9, 8), 3) == 2);
  CHECK(p_adic_valuation(Rational(7), 5) == 0);
  CHECK_THROWS_AS(p_adic_valuation(Rational(0), 2), UnsupportedInput);
}

TEST_CASE("power with negative exponents") {
  CHECK(pow_rational(2, 3) == Rational(8));
  CHECK(pow_rational(2, -3) == Rational(1, 8));
  CHECK(pow_rational(3, 0) == Rational(1));
  CHECK(pow_rational(5, -1) == Rational(1, 5));
}

TEST_CASE("render and parse round-trip") {
  for (const char* text : {"0", "5", "-5", "1/3", "-7/12", "22/7"}) {
    const Rational q = parse_rational(text);
    CHECK(render_rational(q) == text);
    CHECK(parse_rational(render_rational(q)) == q);
  }
  CHECK(parse_rational(" 3/6 ") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}
