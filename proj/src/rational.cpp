#include "tpbessel/rational.hpp"

#include <algorithm>
#include <sstream>

namespace tpbessel {

void poly_trim(RPoly& p)
{
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RPoly poly_add(const RPoly& a, const RPoly& b)
{
  RPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  poly_trim(r);
  return r;
}

RPoly poly_sub(const RPoly& a, const RPoly& b)
{
  RPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  poly_trim(r);
  return r;
}

RPoly poly_mul(const RPoly& a, const RPoly& b)
{
  if (a.empty() || b.empty()) return {};
  RPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  poly_trim(r);
  return r;
}

RPoly poly_scale(const RPoly& a, const Rational& c)
{
  RPoly r(a);
  for (auto& x : r) x *= c;
  poly_trim(r);
  return r;
}

RPoly poly_deriv(const RPoly& a)
{
  if (a.size() <= 1) return {};
  RPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<long>(i);
  poly_trim(r);
  return r;
}

Rational poly_eval(const RPoly& a, const Rational& x)
{
  Rational s = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * x + *it;
  return s;
}

RPoly one_minus_x_pow(int k)
{
  RPoly r{Rational(1)};
  const RPoly f{Rational(1), Rational(-1)};
  for (int i = 0; i < k; ++i) r = poly_mul(r, f);
  return r;
}

RPoly poly_reflect(const RPoly& p)
{
  RPoly r;
  for (std::size_t k = 0; k < p.size(); ++k)
    r = poly_add(r, poly_scale(one_minus_x_pow(static_cast<int>(k)), p[k]));
  return r;
}

int poly_degree(const RPoly& p)
{
  RPoly q(p);
  poly_trim(q);
  return static_cast<int>(q.size()) - 1;
}

bool poly_equal(const RPoly& a, const RPoly& b)
{
  return poly_sub(a, b).empty();
}

BigInt poly_common_denominator(const RPoly& p)
{
  BigInt d = 1;
  for (const auto& c : p) {
    BigInt den = boost::multiprecision::denominator(c);
    d = d / boost::multiprecision::gcd(d, den) * den;
  }
  return d;
}

std::string poly_to_string(const RPoly& p)
{
  BigInt d = poly_common_denominator(p);
  std::ostringstream os;
  os << d << " :";
  for (const auto& c : p) {
    Rational n = c * Rational(d);
    os << ' ' << boost::multiprecision::numerator(n);
  }
  return os.str();
}

}  // namespace tpbessel
