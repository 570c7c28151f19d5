#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tpbessel {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense polynomial, ascending coefficients.
using RPoly = std::vector<Rational>;

void poly_trim(RPoly& p);
RPoly poly_add(const RPoly& a, const RPoly& b);
RPoly poly_sub(const RPoly& a, const RPoly& b);
RPoly poly_mul(const RPoly& a, const RPoly& b);
RPoly poly_scale(const RPoly& a, const Rational& c);
RPoly poly_deriv(const RPoly& a);
Rational poly_eval(const RPoly& a, const Rational& x);
// p(x) -> p(1 - x)
RPoly poly_reflect(const RPoly& p);
// (1 - x)^k
RPoly one_minus_x_pow(int k);
int poly_degree(const RPoly& p);
bool poly_equal(const RPoly& a, const RPoly& b);

// Lowest common denominator of all coefficients and the integer numerators.
BigInt poly_common_denominator(const RPoly& p);
std::string poly_to_string(const RPoly& p);

template <class R> R rational_to(const Rational& q)
{
  return R(boost::multiprecision::numerator(q)) / R(boost::multiprecision::denominator(q));
}

template <> inline double rational_to<double>(const Rational& q) { return q.convert_to<double>(); }

}  // namespace tpbessel
