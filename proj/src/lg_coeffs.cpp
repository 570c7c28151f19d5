#include "tpbessel/lg_coeffs.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "tpbessel/errors.hpp"

namespace tpbessel {

DeltaRational& DeltaRational::operator+=(const DeltaRational& o)
{
  for (const auto& [k, c] : o.terms) {
    auto& t = terms[k];
    t += c;
    if (t == 0) terms.erase(k);
  }
  return *this;
}

DeltaRational DeltaRational::operator*(const DeltaRational& o) const
{
  DeltaRational r;
  for (const auto& [ka, ca] : terms)
    for (const auto& [kb, cb] : o.terms) {
      DeltaRational t;
      t.terms[{ka.first + kb.first, ka.second + kb.second}] = ca * cb;
      r += t;
    }
  return r;
}

DeltaRational DeltaRational::scaled(const Rational& c) const
{
  DeltaRational r;
  if (c == 0) return r;
  for (const auto& [k, v] : terms) r.terms[k] = v * c;
  return r;
}

DeltaRational DeltaRational::half_z_over_delta_derivative() const
{
  // (z/(2 delta)) d/dz [x^i delta^{-j}] = i x^i delta^{-j-1} + (j/2) x^{i+1} delta^{-j-3}
  DeltaRational r;
  for (const auto& [k, c] : terms) {
    const auto [i, j] = k;
    DeltaRational t;
    if (i != 0) t.terms[{i, j + 1}] = c * i;
    if (j != 0) {
      DeltaRational u;
      u.terms[{i + 1, j + 3}] = c * Rational(j, 2);
      t += u;
    }
    r += t;
  }
  return r;
}

DeltaRational::Canonical DeltaRational::canonical() const
{
  Canonical out;
  if (terms.empty()) return out;
  int jmax = terms.begin()->first.second;
  for (const auto& [k, c] : terms) jmax = std::max(jmax, k.second);
  for (const auto& [k, c] : terms) {
    const int diff = jmax - k.second;
    if (diff % 2 != 0) throw std::logic_error("DeltaRational: mixed delta parity");
    RPoly mono(k.first + 1, Rational(0));
    mono[k.first] = c;
    out.num = poly_add(out.num, poly_mul(mono, one_minus_x_pow(diff / 2)));
  }
  out.delta_power = jmax;
  return out;
}

std::vector<DeltaRational> build_fhat(int s_max)
{
  if (s_max < 1) throw std::invalid_argument("build_fhat: s_max < 1");
  std::vector<DeltaRational> f(s_max + 1);
  // F^_1 = z^2 (z^2+4) / (8 (z^2-1)^3) = -(x^2 + 4x)/8 * delta^{-6}
  f[1].terms[{1, 6}] = Rational(-1, 2);
  f[1].terms[{2, 6}] = Rational(-1, 8);
  for (int s = 1; s < s_max; ++s) {
    DeltaRational next = f[s].half_z_over_delta_derivative();
    DeltaRational conv;
    for (int j = 1; j <= s - 1; ++j) conv += f[j] * f[s - j];
    next += conv.scaled(Rational(-1, 2));
    f[s + 1] = next;
  }
  return f;
}

std::vector<RPoly> build_q(int s_max)
{
  if (s_max < 1) throw std::invalid_argument("build_q: s_max < 1");
  std::vector<RPoly> q(s_max + 1);
  // Sign fixed by the printed F^_1 (denominator (z^2-1)^3).
  q[1] = {Rational(-1, 2), Rational(-1, 8)};
  const RPoly t{Rational(0), Rational(1)};
  const RPoly t_one_minus_t{Rational(0), Rational(1), Rational(-1)};
  for (int s = 1; s < s_max; ++s) {
    RPoly lin{Rational(1), Rational(3 * s + 1, 2)};
    RPoly next = poly_add(poly_mul(lin, q[s]), poly_mul(t_one_minus_t, poly_deriv(q[s])));
    RPoly conv;
    for (int j = 1; j <= s - 1; ++j) conv = poly_add(conv, poly_mul(q[j], q[s - j]));
    next = poly_sub(next, poly_scale(poly_mul(t, conv), Rational(1, 2)));
    q[s + 1] = next;
  }
  return q;
}

std::vector<RPoly> build_p(const std::vector<RPoly>& q)
{
  // E^_s = (1/2) int_t^inf Q_s(r) (1-r)^{-1-3s/2} dr. With u = 1 - t and
  // Q_s = sum q_k u^k, termwise: E^_s = sum_k q_k/(2k - 3s) u^{k - 3s/2},
  // which vanishes at infinity since k <= s < 3s/2.
  std::vector<RPoly> p(q.size());
  for (std::size_t s = 1; s < q.size(); ++s) {
    RPoly qu = poly_reflect(q[s]);
    RPoly pu(qu.size());
    for (std::size_t k = 0; k < qu.size(); ++k)
      pu[k] = qu[k] / Rational(2 * static_cast<long>(k) - 3 * static_cast<long>(s));
    p[s] = poly_reflect(pu);
  }
  return p;
}

bool fhat_matches_q(const DeltaRational& f, const RPoly& q, int s)
{
  const auto c = f.canonical();
  const int jq = 3 * (s + 1);
  const int j = std::max(c.delta_power, jq);
  if ((j - c.delta_power) % 2 != 0 || (j - jq) % 2 != 0) return false;
  RPoly lhs = poly_mul(c.num, one_minus_x_pow((j - c.delta_power) / 2));
  RPoly xq = poly_mul(RPoly{Rational(0), Rational(1)}, q);
  RPoly rhs = poly_mul(xq, one_minus_x_pow((j - jq) / 2));
  return poly_equal(lhs, rhs);
}

PolyTable build_poly_table(int s_max)
{
  PolyTable t;
  t.s_max = s_max;
  t.Q = build_q(s_max);
  t.P = build_p(t.Q);
  return t;
}

const PolyTable& default_poly_table()
{
  static const PolyTable t = build_poly_table(kDefaultSMax);
  return t;
}

std::string dump_poly_table(const PolyTable& t)
{
  std::ostringstream os;
  for (int s = 1; s <= t.s_max; ++s) os << "Q " << s << ' ' << poly_to_string(t.Q[s]) << '\n';
  for (int s = 1; s <= t.s_max; ++s) os << "P " << s << ' ' << poly_to_string(t.P[s]) << '\n';
  return os.str();
}

std::vector<Rational> bernoulli_numbers(int n)
{
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rational s = 0;
    BigInt binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      s += Rational(binom) * b[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[m] = -s / Rational(m + 1);
  }
  return b;
}

std::vector<Rational> stirling_constants(int j_max)
{
  if (j_max < 0) throw std::invalid_argument("stirling_constants: j_max < 0");
  const auto b = bernoulli_numbers(2 * j_max + 2);
  std::vector<Rational> c(j_max + 1);
  for (int j = 0; j <= j_max; ++j) c[j] = b[2 * j + 2] / Rational((2 * j + 1) * (2 * j + 2));
  return c;
}

template <class R> CoeffEvaluatorT<R>::CoeffEvaluatorT(const PolyTable& table) : s_max_(table.s_max)
{
  pu_.resize(s_max_ + 1);
  qx_.resize(s_max_ + 1);
  for (int s = 1; s <= s_max_; ++s) {
    for (const auto& c : poly_reflect(table.P[s])) pu_[s].push_back(rational_to<R>(c));
    for (const auto& c : table.Q[s]) qx_[s].push_back(rational_to<R>(c));
    if (pu_[s].empty()) pu_[s].push_back(R(0));
    if (qx_[s].empty()) qx_[s].push_back(R(0));
  }
}

namespace {

template <class C, class R> C horner_c(const std::vector<R>& c, const C& x)
{
  C s(c.back());
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) s = s * x + *it;
  return s;
}

template <class C> C ipow(C x, int n)
{
  C r(1);
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

}  // namespace

template <class R> void CoeffEvaluatorT<R>::check_singular(const C& z) const
{
  using std::abs;
  if (abs(z - C(1)) < R(1e-8) || abs(z + C(1)) < R(1e-8))
    throw domain_error("eval_ehat: z within 1e-8 of a turning point");
}

template <class R>
typename CoeffEvaluatorT<R>::C CoeffEvaluatorT<R>::ehat_delta(int s, const C& z, const C& delta) const
{
  if (s < 1 || s > s_max_) throw std::out_of_range("ehat: s outside table");
  check_singular(z);
  const C u = delta * delta;
  return horner_c(pu_[s], u) * ipow(C(1) / delta, 3 * s);
}

template <class R>
typename CoeffEvaluatorT<R>::C CoeffEvaluatorT<R>::fhat_delta(int s, const C& z, const C& delta) const
{
  if (s < 1 || s > s_max_) throw std::out_of_range("fhat: s outside table");
  check_singular(z);
  const C x = z * z;
  return x * horner_c(qx_[s], x) * ipow(C(1) / delta, 3 * s + 3);
}

template <class R>
typename CoeffEvaluatorT<R>::C CoeffEvaluatorT<R>::ehat(int s, const MapPointT<R>& p) const
{
  return ehat_delta(s, p.z, p.delta);
}

template <class R>
typename CoeffEvaluatorT<R>::C CoeffEvaluatorT<R>::fhat(int s, const MapPointT<R>& p) const
{
  return fhat_delta(s, p.z, p.delta);
}

template <class R>
typename CoeffEvaluatorT<R>::C CoeffEvaluatorT<R>::ehat_prime(int s, const MapPointT<R>& p) const
{
  return -(p.delta / p.z) * fhat(s, p);
}

template <class R> void CoeffEvaluatorT<R>::ehat_all(const MapPointT<R>& p, int n, C* out) const
{
  if (n > s_max_) throw std::out_of_range("ehat_all: n outside table");
  check_singular(p.z);
  const C u = p.delta * p.delta;
  const C inv = C(1) / p.delta;
  const C inv3 = inv * inv * inv;
  C scale = inv3;
  for (int s = 1; s <= n; ++s) {
    out[s - 1] = horner_c(pu_[s], u) * scale;
    scale *= inv3;
  }
}

template <class R> const CoeffEvaluatorT<R>& default_evaluator()
{
  static const CoeffEvaluatorT<R> e(default_poly_table());
  return e;
}

template class CoeffEvaluatorT<double>;
template class CoeffEvaluatorT<ext_real>;
template const CoeffEvaluatorT<double>& default_evaluator<double>();
template const CoeffEvaluatorT<ext_real>& default_evaluator<ext_real>();

namespace {

// Loop quadrature in the precision of R; Ehat_9 reaches ~1e6 on typical
// loops, so an absolute 1e-12 result needs more than double.
template <class R> complex_t<R> check_alpha_impl(int j, const R& zeta0, const R& offset)
{
  using C = complex_t<R>;
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;
  const int s = 2 * j + 1;
  const auto& ev = default_evaluator<R>();
  // Real z0 in (0,1) with zeta(z0) = zeta0; zeta decreases on (0,1).
  R z0 = R(0.5);
  for (int it = 0; it < 200; ++it) {
    const MapPointT<R> p = map_point<R>(C(z0, R(0)));
    const R step = (real(p.zeta) - zeta0) / real(p.zeta_prime);
    R zn = z0 - step;
    if (zn <= 0) zn = z0 / 2;
    if (zn >= 1) zn = (z0 + 1) / 2;
    const bool done = abs(zn - z0) < 16 * eps_v<R>();
    z0 = zn;
    if (done) break;
  }
  const R r = 1 - z0;
  const MapPointT<R> start = map_point<R>(C(z0, R(0)));
  const C e0 = ev.ehat(s, start) + offset;
  // z(theta) = 1 - r e^{i theta}: a positively oriented loop about zeta = 0,
  // with delta continued along it.
  auto integrand = [&](const R& th) {
    const C e(cos(th), sin(th));
    const C z = C(1) - r * e;
    const C half(cos(th / 2), sin(th / 2));
    const C delta = sqrt(r) * half * sqrt(C(2) - r * e);
    const C dz = C(R(0), -r) * e;
    return C(-(delta / z) * ev.fhat_delta(s, z, delta) * dz);
  };
  constexpr int panels = 32;
  C loop(0);
  const R two_pi = 2 * pi_v<R>();
  for (int k = 0; k < panels; ++k) {
    const R a = two_pi * k / panels, b = two_pi * (k + 1) / panels;
    auto re = [&](const R& th) { return R(real(integrand(th))); };
    auto im = [&](const R& th) { return R(imag(integrand(th))); };
    loop += C(boost::math::quadrature::gauss<R, 30>::integrate(re, a, b),
              boost::math::quadrature::gauss<R, 30>::integrate(im, a, b));
  }
  const C e_star = e0 + loop;
  return (e_star + e0) / R(2);
}

}  // namespace

cdouble check_alpha(int j, double zeta0, double offset)
{
  if (!(zeta0 > 0)) throw std::invalid_argument("check_alpha: zeta0 must be positive");
  if (j < 0 || 2 * j + 1 > kDefaultSMax) throw std::invalid_argument("check_alpha: j outside table");
  return to_cdouble<ext_real>(check_alpha_impl<ext_real>(j, ext_real(zeta0), ext_real(offset)));
}

}  // namespace tpbessel
