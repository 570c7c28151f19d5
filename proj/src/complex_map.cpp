#include "tpbessel/complex_map.hpp"

#include <array>
#include <vector>

#include "tpbessel/errors.hpp"
#include "tpbessel/rational.hpp"

namespace tpbessel {

const char* region_name(Region r)
{
  switch (r) {
    case Region::inside_eye: return "inside-eye";
    case Region::outside_eye_re_gt_1: return "outside-eye-re-gt-1";
    case Region::outside_eye_other: return "outside-eye-other";
  }
  return "?";
}

namespace {

template <class R> constexpr int series_terms() { return std::is_same_v<R, double> ? 11 : 40; }

// Maclaurin coefficients in u = delta^2 of f = g^{1/3},
// g(u) = sum_k 3 u^k / (2k+3), so that xi = delta^3 g / 3.
inline std::vector<Rational> f_series_rational(int n)
{
  std::vector<Rational> g(n), h(n);
  for (int k = 0; k < n; ++k) g[k] = Rational(3, 2 * k + 3);
  const Rational alpha(1, 3);
  h[0] = 1;
  for (int m = 1; m < n; ++m) {
    Rational s = 0;
    for (int k = 1; k <= m; ++k) s += (alpha * k - (m - k)) * g[k] * h[m - k];
    h[m] = s / m;
  }
  return h;
}

template <class R> struct SeriesTables {
  std::vector<R> f, g;
  R c23, c13, c16, c2p13;  // 2^{-2/3}, 2^{-1/3}, 2^{-1/6}, 2^{1/3}
  SeriesTables()
  {
    using std::pow;
    const int n = series_terms<R>();
    for (const auto& q : f_series_rational(n)) f.push_back(rational_to<R>(q));
    for (int k = 0; k < n; ++k) g.push_back(R(3) / R(2 * k + 3));
    c23 = pow(R(2), R(-2) / 3);
    c13 = pow(R(2), R(-1) / 3);
    c16 = pow(R(2), R(-1) / 6);
    c2p13 = pow(R(2), R(1) / 3);
  }
};

template <class R> const SeriesTables<R>& tables()
{
  static const SeriesTables<R> t;
  return t;
}

template <class C, class R> C horner(const std::vector<R>& c, const C& x)
{
  C s(c.back());
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) s = s * x + *it;
  return s;
}

// atanh(d) - d = d^3 sum_k d^{2k}/(2k+3), for |d| < 1.
template <class C, class R> C atanh_minus_id(const C& d)
{
  using std::abs;
  const C u = d * d;
  C term(1), sum(0);
  const R tol = eps_v<R>() / 4;
  for (int k = 0; k < 4000; ++k) {
    C add = term / R(2 * k + 3);
    sum += add;
    if (abs(add) <= tol * abs(sum)) break;
    term *= u;
  }
  return d * u * sum;
}

// s - atan(s) = s^3 sum_k (-1)^k s^{2k}/(2k+3), real s.
template <class R> R s_minus_atan(const R& s)
{
  using std::abs;
  using std::atan;
  if (s > R(0.6)) return s - atan(s);
  const R u = -s * s;
  R term(1), sum(0);
  for (int k = 0; k < 4000; ++k) {
    R add = term / R(2 * k + 3);
    sum += add;
    if (abs(add) <= eps_v<R>() / 4 * abs(sum)) break;
    term *= u;
  }
  return s * s * s * sum;
}

template <class R> R xi_real_01(const R& x, const R& d)
{
  using std::log;
  if (d < R(0.6)) {
    const R u = d * d;
    R term(1), sum(0);
    for (int k = 0; k < 4000; ++k) {
      R add = term / R(2 * k + 3);
      sum += add;
      if (add <= eps_v<R>() / 4 * sum) break;
      term *= u;
    }
    return d * u * sum;
  }
  return log((1 + d) / x) - d;
}

template <class R> void check_domain(const complex_t<R>& z)
{
  if (imag(z) == 0 && real(z) <= 0) throw domain_error("complex_map: z on the cut (-inf, 0]");
}

template <class R> R zeta_arg_upper(const complex_t<R>& zeta)
{
  using std::atan2;
  R a = atan2(imag(zeta), real(zeta));
  if (a > 0) a = real(zeta) < 0 ? a - 2 * pi_v<R>() : R(0);
  return a;
}

// Sheet +1 values for Im z >= 0.
template <class R> MapPointT<R> map_upper(const complex_t<R>& z)
{
  using C = complex_t<R>;
  using std::abs;
  using std::log;
  using std::sqrt;
  const auto& T = tables<R>();
  MapPointT<R> p;
  p.z = z;
  p.sheet = 1;
  const R x = real(z);

  if (imag(z) == 0) {
    const R w = (1 - x) * (1 + x);
    if (x < 1) {
      const R d = sqrt(w);
      p.delta = C(d, 0);
      if (d < R(kDeltaSeriesThreshold)) {
        const R f = horner(T.f, w);
        p.zeta = C(T.c23 * w * f * f, 0);
        p.zeta_half = C(T.c13 * d * f, 0);
        p.xi = C(d * w * horner(T.g, w) / 3, 0);
        p.zeta_prime = C(-T.c2p13 / (x * f), 0);
        p.y_factor = C(T.c16 * sqrt(f), 0);
      } else {
        using std::pow;
        const R xi = xi_real_01(x, d);
        const R zeta = pow(R(1.5) * xi, R(2) / 3);
        p.xi = C(xi, 0);
        p.zeta = C(zeta, 0);
        p.zeta_half = C(R(1.5) * xi / zeta, 0);
        p.zeta_prime = C(-d / (x * real(p.zeta_half)), 0);
        p.y_factor = C(sqrt(real(p.zeta_half) / d), 0);
      }
    } else if (x == 1) {
      p.delta = C(0);
      p.zeta = C(0);
      p.zeta_half = C(0);
      p.xi = C(0);
      p.zeta_prime = C(-T.c2p13, 0);
      p.y_factor = C(T.c16, 0);
    } else {
      // Limit from above: delta = -i sqrt(x^2-1), zeta^{1/2} = -i |zeta|^{1/2}.
      const R s = sqrt((x - 1) * (x + 1));
      p.delta = C(0, -s);
      if (s < R(kDeltaSeriesThreshold)) {
        const R u = -s * s;
        const R f = horner(T.f, u);
        p.zeta = C(T.c23 * u * f * f, 0);
        p.zeta_half = C(0, -T.c13 * s * f);
        p.xi = C(0, s * s * s * horner(T.g, u) / 3);
        p.zeta_prime = C(-T.c2p13 / (x * f), 0);
        p.y_factor = C(T.c16 * sqrt(f), 0);
      } else {
        using std::pow;
        const R v = s_minus_atan(s);
        const R mz = pow(R(1.5) * v, R(2) / 3);
        p.xi = C(0, v);
        p.zeta = C(-mz, 0);
        p.zeta_half = C(0, -sqrt(mz));
        p.zeta_prime = C(-s / (x * sqrt(mz)), 0);
        p.y_factor = C(sqrt(sqrt(mz) / s), 0);
      }
    }
  } else {
    const C one(1);
    const C u = (one - z) * (one + z);
    const C d = sqrt(u);
    p.delta = d;
    if (abs(d) < R(kDeltaSeriesThreshold) && x > 0) {
      const C f = horner(T.f, u);
      p.zeta = T.c23 * u * f * f;
      p.zeta_half = T.c13 * d * f;
      p.xi = d * u * horner(T.g, u) / R(3);
      p.zeta_prime = -T.c2p13 / (z * f);
      p.y_factor = T.c16 * sqrt(f);
    } else {
      if (abs(d) < R(0.6) && x > 0)
        p.xi = atanh_minus_id<C, R>(d);
      else
        p.xi = log((one + d) / z) - d;
      p.zeta = detail::zeta_from_xi<R>(p.xi, x <= 1 ? 1 : 2);
      p.zeta_half = R(1.5) * p.xi / p.zeta;
      p.zeta_prime = -d / (z * p.zeta_half);
      p.y_factor = sqrt(p.zeta_half / d);
    }
  }
  p.x_factor = p.delta * p.y_factor;
  p.xi_arg = R(1.5) * zeta_arg_upper<R>(p.zeta);
  if (real(p.xi) > 0)
    p.region = Region::inside_eye;
  else
    p.region = x > 1 ? Region::outside_eye_re_gt_1 : Region::outside_eye_other;
  return p;
}

template <class R> MapPointT<R> conj_point(const MapPointT<R>& q)
{
  MapPointT<R> p = q;
  p.z = conj(q.z);
  p.zeta = conj(q.zeta);
  p.xi = conj(q.xi);
  p.zeta_prime = conj(q.zeta_prime);
  p.delta = conj(q.delta);
  p.zeta_half = conj(q.zeta_half);
  p.y_factor = conj(q.y_factor);
  p.x_factor = conj(q.x_factor);
  p.xi_arg = -q.xi_arg;
  return p;
}

}  // namespace

namespace detail {

template <class R> complex_t<R> zeta_from_xi(const complex_t<R>& xi, int line)
{
  using C = complex_t<R>;
  using std::exp;
  using std::log;
  if (xi == C(0)) return C(0);
  const R two_thirds = R(2) / 3;
  if (line == 1) return exp(log(R(1.5) * xi) * two_thirds);
  return -exp(log(C(0, R(-1.5)) * xi) * two_thirds);
}

}  // namespace detail

template <class R> MapPointT<R> flip_sheet(const MapPointT<R>& q)
{
  MapPointT<R> p = q;
  p.delta = -q.delta;
  p.xi = -q.xi;
  p.zeta_half = -q.zeta_half;
  p.x_factor = -q.x_factor;
  p.sheet = -q.sheet;
  // Continuation through (1,inf) adds -/+ 2pi to arg zeta.
  const R shift = 3 * pi_v<R>();
  p.xi_arg = imag(q.z) < 0 ? (q.sheet == 1 ? q.xi_arg - shift : q.xi_arg + shift)
                           : (q.sheet == 1 ? q.xi_arg + shift : q.xi_arg - shift);
  return p;
}

template <class R> MapPointT<R> map_point(const complex_t<R>& z, int sheet)
{
  check_domain<R>(z);
  MapPointT<R> p = imag(z) < 0 ? conj_point(map_upper<R>(conj(z))) : map_upper<R>(z);
  if (sheet == -1) p = flip_sheet(p);
  return p;
}

template <class R> complex_t<R> map_zeta(const complex_t<R>& z) { return map_point<R>(z).zeta; }

template <class R> complex_t<R> map_zeta_prime(const complex_t<R>& z)
{
  return map_point<R>(z).zeta_prime;
}

template <class R> MapPointT<R> map_xi(const complex_t<R>& z)
{
  if (real(z) < 0) throw domain_error("map_xi: |arg z| > pi/2");
  return map_point<R>(z, imag(z) < 0 ? -1 : 1);
}

template <class R> Region classify_region(const complex_t<R>& z) { return map_point<R>(z).region; }

#define TPB_INSTANTIATE(R)                                                    \
  template MapPointT<R> map_point<R>(const complex_t<R>&, int);              \
  template MapPointT<R> flip_sheet<R>(const MapPointT<R>&);                  \
  template complex_t<R> map_zeta<R>(const complex_t<R>&);                    \
  template complex_t<R> map_zeta_prime<R>(const complex_t<R>&);              \
  template MapPointT<R> map_xi<R>(const complex_t<R>&);                      \
  template Region classify_region<R>(const complex_t<R>&);                   \
  template complex_t<R> detail::zeta_from_xi<R>(const complex_t<R>&, int);

TPB_INSTANTIATE(double)
TPB_INSTANTIATE(ext_real)
#undef TPB_INSTANTIATE

}  // namespace tpbessel
