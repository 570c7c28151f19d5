#include "doctest.h"
#include "tpbessel/rational.hpp"

using namespace tpbessel;

TEST_CASE("poly arithmetic")
{
  RPoly a{Rational(1), Rational(2)};   // 1 + 2x
  RPoly b{Rational(-1), Rational(0), Rational(3)};  // -1 + 3x^2
  CHECK(poly_equal(poly_add(a, b), RPoly{Rational(0), Rational(2), Rational(3)}));
  CHECK(poly_equal(poly_mul(a, b), RPoly{Rational(-1), Rational(-2), Rational(3), Rational(6)}));
  CHECK(poly_equal(poly_deriv(b), RPoly{Rational(0), Rational(6)}));
  CHECK(poly_eval(b, Rational(1, 3)) == Rational(-2, 3));
  CHECK(poly_degree(poly_sub(a, a)) < 0);
}

TEST_CASE("reflection and binomial powers")
{
  RPoly p{Rational(0), Rational(1)};
  CHECK(poly_equal(poly_reflect(p), RPoly{Rational(1), Rational(-1)}));
  RPoly c = one_minus_x_pow(3);
  CHECK(poly_equal(c, RPoly{Rational(1), Rational(-3), Rational(3), Rational(-1)}));
}

TEST_CASE("common denominator")
{
  RPoly p{Rational(1, 6), Rational(3, 4)};
  CHECK(poly_common_denominator(p) == 12);
  CHECK(rational_to<double>(Rational(1, 4)) == 0.25);
}
