#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mitk/rational.hpp"

using mitk::Rational;

TEST_CASE("floor rounds toward minus infinity") {
  CHECK(mitk::floor(Rational(7, 2)) == 3);
  CHECK(mitk::floor(Rational(-7, 2)) == -4);
  CHECK(mitk::floor(Rational(-4)) == -4);
  CHECK(mitk::floor_plus(Rational(-1, 3)) == 0);
  CHECK(mitk::floor_plus(Rational(5, 3)) == 1);
}

TEST_CASE("parse and print") {
  CHECK(mitk::parse_rational("3/6") == Rational(1, 2));
  CHECK(mitk::parse_rational("-2") == Rational(-2));
  CHECK(mitk::to_string(Rational(4, 2)) == "2");
  CHECK(mitk::to_string(Rational(-1, 3)) == "-1/3");
  CHECK_THROWS_AS(mitk::parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(mitk::parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(mitk::parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(mitk::parse_rational("1.5"), std::invalid_argument);
}

TEST_CASE("integers") {
  CHECK(mitk::is_integer(Rational(6, 3)));
  CHECK_FALSE(mitk::is_integer(Rational(1, 3)));
  CHECK(mitk::to_double(Rational(1, 4)) == 0.25);
}
