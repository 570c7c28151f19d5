#pragma once

#include <complex>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace tpbessel {

using cdouble = std::complex<double>;

// 50 significant digits; used for the oracle-grade quadrature path.
using ext_real = boost::multiprecision::cpp_bin_float_50;
using ext_complex = boost::multiprecision::cpp_complex_50;

template <class R> struct complex_of;
template <> struct complex_of<double> { using type = std::complex<double>; };
template <> struct complex_of<ext_real> { using type = ext_complex; };

template <class R> using complex_t = typename complex_of<R>::type;

template <class R> inline R pi_v() { return boost::math::constants::pi<R>(); }

template <class R> inline R eps_v() { return std::numeric_limits<R>::epsilon(); }

template <class R> inline double to_double(const R& x) { return static_cast<double>(x); }

template <class R> inline cdouble to_cdouble(const complex_t<R>& z)
{
  return {static_cast<double>(real(z)), static_cast<double>(imag(z))};
}

template <class R> inline complex_t<R> from_cdouble(cdouble z)
{
  return complex_t<R>(R(z.real()), R(z.imag()));
}

// Relative (or absolute, when reference is zero) deviation.
inline double rel_err(cdouble value, cdouble ref)
{
  double d = std::abs(value - ref);
  double m = std::abs(ref);
  return m == 0.0 ? d : d / m;
}

}  // namespace tpbessel
