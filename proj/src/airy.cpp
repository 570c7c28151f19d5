#include "tpbessel/airy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace tpbessel {

ExpCoeffs exp_coeffs(int s_max)
{
  if (s_max < 2) throw std::invalid_argument("exp_coeffs: s_max < 2");
  ExpCoeffs c;
  c.count = s_max;
  c.a.assign(s_max + 1, Rational(0));
  c.a_tilde.assign(s_max + 1, Rational(0));
  c.a[1] = c.a[2] = Rational(5, 72);
  c.a_tilde[1] = c.a_tilde[2] = Rational(-7, 72);
  for (auto* v : {&c.a, &c.a_tilde}) {
    auto& a = *v;
    for (int s = 2; s < s_max; ++s) {
      Rational conv = 0;
      for (int j = 1; j <= s - 1; ++j) conv += a[j] * a[s - j];
      a[s + 1] = Rational(s + 1, 2) * a[s] + conv / 2;
    }
  }
  return c;
}

namespace {

constexpr int kTableTerms = 120;

}  // namespace

const ExpCoeffs& default_exp_coeffs()
{
  static const ExpCoeffs c = exp_coeffs(kTableTerms);
  return c;
}

const std::vector<double>& exp_coeffs_a_double()
{
  static const std::vector<double> v = [] {
    std::vector<double> r;
    for (const auto& q : default_exp_coeffs().a) r.push_back(rational_to<double>(q));
    return r;
  }();
  return v;
}

const std::vector<double>& exp_coeffs_a_tilde_double()
{
  static const std::vector<double> v = [] {
    std::vector<double> r;
    for (const auto& q : default_exp_coeffs().a_tilde) r.push_back(rational_to<double>(q));
    return r;
  }();
  return v;
}

namespace {

using quad = __float128;

struct qc {
  quad re, im;
};

inline qc operator+(qc a, qc b) { return {a.re + b.re, a.im + b.im}; }
inline qc operator-(qc a, qc b) { return {a.re - b.re, a.im - b.im}; }
inline qc operator-(qc a) { return {-a.re, -a.im}; }
inline qc operator*(qc a, qc b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline qc operator*(qc a, quad s) { return {a.re * s, a.im * s}; }
inline qc operator/(qc a, quad s) { return {a.re / s, a.im / s}; }
inline quad qabs2(qc a) { return a.re * a.re + a.im * a.im; }
inline cdouble to_c(qc a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }
inline qc from_c(cdouble a) { return {a.real(), a.imag()}; }

const quad kAi0 = 0.355028053887817239260063186004183176397979174Q;
const quad kMinusAip0 = 0.258819403792806798405183560189203963479091138Q;
const quad kSqrt3Half = 0.866025403784438646763723170752936183471402625Q;
const double kSqrtPi = 1.77245385090551602729816748334114518;

// e^{2 pi i k/3}, exact up to quad rounding.
qc omega_pow(int k)
{
  k = ((k % 3) + 3) % 3;
  if (k == 0) return {1, 0};
  if (k == 1) return {-0.5Q, kSqrt3Half};
  return {-0.5Q, -kSqrt3Half};
}

AiryPair maclaurin_quad(qc w)
{
  const qc w3 = w * w * w;
  const quad tol = 1e-36Q;
  // f = sum t_k, t_k = w^{3k} / prod; g = sum s_k with s_0 = w.
  qc t{1, 0}, f{1, 0}, fp{0, 0}, q{0, 0};
  qc s = w, g = w, r{1, 0}, gp{1, 0};
  quad scale = 1 + qabs2(w);
  for (int k = 1; k < 400; ++k) {
    const quad a = 3 * k - 1, b = 3 * k, c = 3 * k + 1;
    t = t * w3 / (a * b);
    f = f + t;
    q = (k == 1) ? (w * w) / 6 : q * w3 / (a * b);
    fp = fp + q * b;
    s = s * w3 / (b * c);
    g = g + s;
    r = r * w3 / (b * c);
    gp = gp + r * c;
    quad m = qabs2(t) + qabs2(s) + qabs2(q) + qabs2(r);
    quad ref = qabs2(f) + qabs2(g) + scale * 1e-300Q;
    if (k > 3 && m < tol * tol * ref) break;
  }
  AiryPair p;
  p.value = to_c(f * kAi0 - g * kMinusAip0);
  p.derivative = to_c(fp * kAi0 - gp * kMinusAip0);
  return p;
}

// w^{1/2} to quad accuracy: double sqrt refined by one Newton step.
qc qsqrt(qc w)
{
  cdouble s0 = std::sqrt(to_c(w));
  qc s = from_c(s0);
  if (s0 == cdouble(0)) return s;
  // s - (s^2 - w)/(2 s)
  qc num = s * s - w;
  cdouble corr = to_c(num) / (2.0 * s0);
  return s - from_c(corr);
}

// exp(-xi) * exp(sum) with xi given in quad: split xi into hi + lo parts.
cdouble exp_split(qc xi, cdouble sum, AiryStatus& status)
{
  const cdouble hi = to_c(xi);
  const cdouble lo = to_c(xi - from_c(hi));
  if (-hi.real() > 709.0) status = AiryStatus::overflow;
  if (-hi.real() < -708.0) status = AiryStatus::underflow;
  return std::exp(-hi) * std::exp(sum - lo);
}

// Exponential-form asymptotics, |arg w| <= 2 pi/3, |w| large.
AiryPair asymptotic_quad(qc w)
{
  const auto& a = exp_coeffs_a_double();
  const auto& at = exp_coeffs_a_tilde_double();
  const qc sq = qsqrt(w);
  const qc xiq = w * sq * (2.0Q / 3.0Q);
  const cdouble xi = to_c(xiq);
  const cdouble inv = 1.0 / xi;
  cdouble sa = 0, st = 0, p = 1;
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 1; s < static_cast<int>(a.size()); ++s) {
    p *= -inv;
    cdouble ta = a[s] / s * p, tt = at[s] / s * p;
    double m = std::max(std::abs(ta), std::abs(tt));
    if (m > prev) break;  // optimal truncation reached
    sa += ta;
    st += tt;
    prev = m;
    if (m < 1e-18) break;
  }
  const cdouble w4 = std::sqrt(to_c(sq));
  AiryPair out;
  AiryStatus status = AiryStatus::ok;
  const cdouble e = exp_split(xiq, sa, status);
  const cdouble et = exp_split(xiq, st, status);
  out.value = e / (2.0 * kSqrtPi * w4);
  out.derivative = -w4 * et / (2.0 * kSqrtPi);
  out.status = status;
  return out;
}

AiryPair airy_core(qc w, int depth = 0)
{
  const double r = std::sqrt(static_cast<double>(qabs2(w)));
  if (r <= kAiryMaclaurinRadius) return maclaurin_quad(w);
  const double ang = std::atan2(static_cast<double>(w.im), static_cast<double>(w.re));
  if (std::abs(ang) <= 2.0 * M_PI / 3.0 + 1e-12 || depth > 0) return asymptotic_quad(w);
  // Ai(w) = -omega Ai(omega w) - omega^2 Ai(omega^2 w), omega = e^{2 pi i/3}.
  const qc o1 = omega_pow(1), o2 = omega_pow(2);
  AiryPair p1 = airy_core(o1 * w, 1), p2 = airy_core(o2 * w, 1);
  AiryPair out;
  const qc v = -(o1 * from_c(p1.value)) - o2 * from_c(p2.value);
  // Ai'(w) = -omega^2 Ai'(omega w) - omega^4 Ai'(omega^2 w)
  const qc d = -(o2 * from_c(p1.derivative)) - o1 * from_c(p2.derivative);
  out.value = to_c(v);
  out.derivative = to_c(d);
  out.status = p1.status != AiryStatus::ok ? p1.status : p2.status;
  return out;
}

}  // namespace

AiryPair airy_eval(cdouble w) { return airy_core(from_c(w)); }

AiryPair airy_rotated(int j, cdouble w)
{
  if (j < -1 || j > 1) throw std::invalid_argument("airy_rotated: j must be -1, 0 or 1");
  if (j == 0) return airy_eval(w);
  const qc rot = omega_pow(-j);  // e^{-2 pi i j/3}
  AiryPair p = airy_core(rot * from_c(w));
  p.derivative = to_c(rot * from_c(p.derivative));
  return p;
}

AiryArg airy_arg_principal(cdouble zeta)
{
  AiryArg a;
  a.zeta = zeta;
  const cdouble h = std::sqrt(zeta);
  a.zeta_quarter = std::sqrt(h);
  a.xi = 2.0 / 3.0 * zeta * h;
  return a;
}

AiryArg airy_arg_rotated_turn(const AiryArg& a, int turns)
{
  AiryArg b = a;
  static const cdouble quarter_turn[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  b.zeta_quarter = a.zeta_quarter * quarter_turn[((turns % 4) + 4) % 4];
  if (turns % 2 != 0) b.xi = -a.xi;
  return b;
}

namespace {

// sum_{s <= s_max} a_s/s (-1/(u xi))^s and the first omitted term
std::pair<cdouble, double> lg_airy_series(AiryKind kind, double u, const AiryArg& arg, int s_max)
{
  if (arg.xi == cdouble(0)) throw std::domain_error("lg_airy: xi = 0");
  const auto& a = kind == AiryKind::Ai ? exp_coeffs_a_double() : exp_coeffs_a_tilde_double();
  if (s_max + 1 >= static_cast<int>(a.size())) throw std::invalid_argument("lg_airy: s_max too large");
  const cdouble inv = 1.0 / (u * arg.xi);
  cdouble sum = 0, p = 1;
  for (int s = 1; s <= s_max; ++s) {
    p *= -inv;
    sum += a[s] / s * p;
  }
  p *= -inv;
  return {sum, std::abs(a[s_max + 1] / (s_max + 1) * p)};
}

cdouble lg_airy_prefactor(AiryKind kind, double u, const AiryArg& arg)
{
  const double u16 = std::cbrt(std::sqrt(u));
  if (kind == AiryKind::Ai) return 1.0 / (2.0 * kSqrtPi * u16 * arg.zeta_quarter);
  return -u16 * arg.zeta_quarter / (2.0 * kSqrtPi);
}

}  // namespace

LGAiryResult lg_airy(AiryKind kind, double u, const AiryArg& arg, int s_max)
{
  auto [sum, trunc] = lg_airy_series(kind, u, arg, s_max);
  LGAiryResult r;
  r.truncation = trunc;
  r.value = std::exp(-u * arg.xi + sum) * lg_airy_prefactor(kind, u, arg);
  return r;
}

LGAiryResult lg_airy_scaled(AiryKind kind, double u, const AiryArg& arg, int s_max, cdouble log_factor)
{
  auto [sum, trunc] = lg_airy_series(kind, u, arg, s_max);
  LGAiryResult r;
  r.truncation = trunc;
  r.value = std::exp(log_factor + sum) * lg_airy_prefactor(kind, u, arg);
  return r;
}

template <class R>
std::pair<complex_t<R>, complex_t<R>> airy_maclaurin(const complex_t<R>& w)
{
  using C = complex_t<R>;
  using std::abs;
  using std::pow;
  using boost::math::tgamma;
  static const R ai0 = 1 / (pow(R(3), R(2) / 3) * boost::math::tgamma(R(2) / 3));
  static const R maip0 = 1 / (pow(R(3), R(1) / 3) * boost::math::tgamma(R(1) / 3));
  const C w3 = w * w * w;
  C t(1), f(1), fp(0), q(0);
  C s = w, g = w, r(1), gp(1);
  const R tol = eps_v<R>() / 16;
  for (int k = 1; k < 2000; ++k) {
    const R a = 3 * k - 1, b = 3 * k, c = 3 * k + 1;
    t = t * w3 / (a * b);
    f += t;
    q = (k == 1) ? C(w * w / R(6)) : C(q * w3 / (a * b));
    fp += q * b;
    s = s * w3 / (b * c);
    g += s;
    r = r * w3 / (b * c);
    gp += r * c;
    if (k > 3 && abs(t) + abs(s) + abs(q) + abs(r) < tol * (abs(f) + abs(g) + abs(fp) + abs(gp)))
      break;
  }
  return {f * ai0 - g * maip0, fp * ai0 - gp * maip0};
}

template <class R>
std::pair<complex_t<R>, complex_t<R>> airy_rotated_series(int j, const complex_t<R>& w)
{
  using C = complex_t<R>;
  using std::cos;
  using std::sin;
  if (j == 0) return airy_maclaurin<R>(w);
  const R ang = -2 * pi_v<R>() * j / 3;
  const C rot(cos(ang), sin(ang));
  auto p = airy_maclaurin<R>(w * rot);
  p.second *= rot;
  return p;
}

template std::pair<cdouble, cdouble> airy_maclaurin<double>(const cdouble&);
template std::pair<ext_complex, ext_complex> airy_maclaurin<ext_real>(const ext_complex&);
template std::pair<cdouble, cdouble> airy_rotated_series<double>(int, const cdouble&);
template std::pair<ext_complex, ext_complex> airy_rotated_series<ext_real>(int, const ext_complex&);

}  // namespace tpbessel
