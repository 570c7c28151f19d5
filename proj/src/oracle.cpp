#include "tpbessel/oracle.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tpbessel/errors.hpp"

namespace tpbessel {

namespace {

thread_local mpfr_prec_t g_prec = 256;

class PrecScope {
 public:
  explicit PrecScope(mpfr_prec_t p) : saved_(g_prec) { g_prec = p; }
  ~PrecScope() { g_prec = saved_; }
  PrecScope(const PrecScope&) = delete;
  PrecScope& operator=(const PrecScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Real number at the thread's current precision.
class MR {
 public:
  MR() { mpfr_init2(v_, g_prec); mpfr_set_zero(v_, 1); }
  MR(double d) { mpfr_init2(v_, g_prec); mpfr_set_d(v_, d, MPFR_RNDN); }
  MR(const MR& o) { mpfr_init2(v_, g_prec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MR& operator=(const MR& o)
  {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~MR() { mpfr_clear(v_); }

  mpfr_ptr p() { return v_; }
  mpfr_srcptr p() const { return v_; }
  double d() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend MR operator+(const MR& a, const MR& b) { MR r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MR operator-(const MR& a, const MR& b) { MR r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MR operator*(const MR& a, const MR& b) { MR r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MR operator/(const MR& a, const MR& b) { MR r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  MR operator-() const { MR r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

 private:
  mpfr_t v_;
};

using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

MR apply(UnaryFn f, const MR& x)
{
  MR r;
  f(r.p(), x.p(), MPFR_RNDN);
  return r;
}

MR m_pi() { MR r; mpfr_const_pi(r.p(), MPFR_RNDN); return r; }
MR m_exp(const MR& x) { return apply(mpfr_exp, x); }
MR m_log(const MR& x) { return apply(mpfr_log, x); }
MR m_sqrt(const MR& x) { return apply(mpfr_sqrt, x); }
MR m_sin(const MR& x) { return apply(mpfr_sin, x); }
MR m_cos(const MR& x) { return apply(mpfr_cos, x); }
MR m_gamma(const MR& x) { return apply(mpfr_gamma, x); }
MR m_lngamma(const MR& x) { return apply(mpfr_lngamma, x); }
MR m_atan2(const MR& y, const MR& x) { MR r; mpfr_atan2(r.p(), y.p(), x.p(), MPFR_RNDN); return r; }
MR m_hypot(const MR& x, const MR& y) { MR r; mpfr_hypot(r.p(), x.p(), y.p(), MPFR_RNDN); return r; }
MR m_cbrt(const MR& x) { return apply(mpfr_cbrt, x); }

struct MC {
  MR re, im;
  MC() = default;
  MC(const MR& r, const MR& i) : re(r), im(i) {}
  explicit MC(cdouble z) : re(z.real()), im(z.imag() == 0.0 ? 0.0 : z.imag()) {}
  cdouble c() const { return {re.d(), im.d()}; }
};

MC operator+(const MC& a, const MC& b) { return {a.re + b.re, a.im + b.im}; }
MC operator-(const MC& a, const MC& b) { return {a.re - b.re, a.im - b.im}; }
MC operator-(const MC& a) { return {-a.re, -a.im}; }
MC operator*(const MC& a, const MC& b)
{
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
MC operator*(const MR& s, const MC& a) { return {s * a.re, s * a.im}; }
MC operator/(const MC& a, const MR& s) { return {a.re / s, a.im / s}; }
MC operator/(const MC& a, const MC& b)
{
  MR den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
MR m_abs(const MC& a) { return m_hypot(a.re, a.im); }
MC m_exp(const MC& a)
{
  MR e = m_exp(a.re);
  return {e * m_cos(a.im), e * m_sin(a.im)};
}
MC m_log(const MC& a) { return {m_log(m_abs(a)), m_atan2(a.im, a.re)}; }
MC m_sqrt(const MC& a)
{
  MR r = m_sqrt(m_abs(a));
  MR t = m_atan2(a.im, a.re) / MR(2.0);
  return {r * m_cos(t), r * m_sin(t)};
}
MC m_polar(const MR& r, const MR& t) { return {r * m_cos(t), r * m_sin(t)}; }
MC m_i() { return {MR(0.0), MR(1.0)}; }

double log2_abs(const MR& x)
{
  if (mpfr_zero_p(x.p())) return -1e300;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.p(), MPFR_RNDN);
  return std::log2(std::abs(m)) + static_cast<double>(e);
}
double log2_abs(const MC& a) { return log2_abs(m_abs(a)); }

// Relative distance between two evaluations, as log2.
double rel_diff_log2(const MC& a, const MC& b)
{
  MR d = m_abs(a - b);
  if (mpfr_zero_p(d.p())) return -1e300;
  return log2_abs(d) - log2_abs(b);
}

struct Outputs {
  std::vector<MC> v;
  double loss_bits = 0;  // cancellation estimate
};

// Evaluates at increasing precision until two consecutive runs (p and 2p)
// agree to the target; returns the higher precision run with its precision.
struct Certified {
  std::vector<MC> v;
  double err_log2 = 0;
  mpfr_prec_t bits = 0;
};

Certified certify(const std::function<Outputs()>& f, const PrecisionBudget& b)
{
  const double target_log2 = std::log2(b.target_rel);
  mpfr_prec_t p = static_cast<mpfr_prec_t>(b.working_digits * 3.33) + 64;
  {
    PrecScope s(p);
    Outputs first = f();
    double extra = std::min(std::max(0.0, first.loss_bits), static_cast<double>(b.max_bits));
    p += static_cast<mpfr_prec_t>(extra);
  }
  while (p <= b.max_bits) {
    PrecScope s1(p);
    Outputs lo = f();
    PrecScope s2(2 * p);
    Outputs hi = f();
    double worst = -1e300;
    for (std::size_t i = 0; i < hi.v.size(); ++i)
      worst = std::max(worst, rel_diff_log2(lo.v[i], hi.v[i]));
    if (worst <= target_log2) return {std::move(hi.v), worst, 2 * p};
    p *= 2;
  }
  throw precision_error("oracle: precision budget exhausted");
}

void check_args(double nu, cdouble z)
{
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw domain_error("oracle: nu must be >= 0");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw domain_error("oracle: z not finite");
  if (z == cdouble(0.0)) throw domain_error("oracle: z = 0");
}

void check_nonint(double nu)
{
  if (std::abs(nu - std::round(nu)) < 0.05)
    throw domain_error("oracle: Hankel and Y references need |nu - round(nu)| >= 0.05");
}

struct JPair {
  MC val, der;
  double loss_bits;
};

// J_mu(w) and its w-derivative for mu = sign * nu by the ascending series.
JPair j_series(const MR& nu, int sign, const MC& w)
{
  MR mu = sign > 0 ? nu : -nu;
  MC half = w / MR(2.0);
  MC logh = m_log(half);
  MC pref;
  if (sign > 0) {
    pref = m_exp(MC(mu * logh.re - m_lngamma(nu + MR(1.0)), mu * logh.im));
  } else {
    // 1/Gamma(1 - nu) = Gamma(nu) sin(pi nu) / pi
    MR pi = m_pi();
    MR recip = m_gamma(nu) * m_sin(pi * nu) / pi;
    pref = recip * m_exp(MC(mu * logh.re, mu * logh.im));
  }
  MC q = -(half * half);
  MR qa = m_abs(q);
  MC t(MR(1.0), MR(0.0));
  MC s = t;
  MC ds = mu * t;
  double max_t = 0;
  const double eps_log2 = -static_cast<double>(g_prec) - 8;
  for (long k = 1;; ++k) {
    MR kk(static_cast<double>(k));
    t = t * q / (kk * (mu + kk));
    s = s + t;
    MC dt = (mu + MR(2.0 * k)) * t;
    ds = ds + dt;
    double lt = log2_abs(t);
    max_t = std::max(max_t, lt);
    // Beyond this point the terms decrease at least geometrically.
    double ratio = qa.d() / (static_cast<double>(k + 1) * std::abs(mu.d() + k + 1));
    if (ratio < 0.5 && lt - log2_abs(s) < eps_log2 && log2_abs(dt) - log2_abs(ds) < eps_log2)
      break;
    if (k > 200000) throw precision_error("oracle: series did not terminate");
  }
  JPair r{pref * s, pref * ds / w, 0};
  r.loss_bits = std::max(0.0, max_t - log2_abs(s));
  return r;
}

enum Need { need_j = 1, need_jm = 2 };

struct BesselAll {
  MC J, Jp, Y, Yp;
  double loss;
};

BesselAll bessel_all(double nu_d, cdouble z, int need)
{
  MR nu(nu_d);
  MC w = MR(nu_d) * MC(z);
  JPair jp = j_series(nu, 1, w);
  BesselAll r{jp.val, jp.der, MC(), MC(), jp.loss_bits};
  if (need & need_jm) {
    JPair jm = j_series(nu, -1, w);
    MR pi = m_pi();
    MR c = m_cos(pi * nu), sn = m_sin(pi * nu);
    r.Y = (c * jp.val - jm.val) / sn;
    r.Yp = (c * jp.der - jm.der) / sn;
    r.loss = std::max(r.loss, jm.loss_bits);
    // Cancellation in J cos - J_{-nu}
    r.loss = std::max(r.loss, log2_abs(jm.val) - log2_abs(r.Y));
  }
  return r;
}

MC pick(const BesselAll& b, OracleFn f)
{
  MC i = m_i();
  switch (f) {
    case OracleFn::J: return b.J;
    case OracleFn::Jp: return b.Jp;
    case OracleFn::Y: return b.Y;
    case OracleFn::Yp: return b.Yp;
    case OracleFn::H1: return b.J + i * b.Y;
    case OracleFn::H1p: return b.Jp + i * b.Yp;
    case OracleFn::H2: return b.J - i * b.Y;
    case OracleFn::H2p: return b.Jp - i * b.Yp;
  }
  return b.J;
}

bool needs_jm(OracleFn f) { return !(f == OracleFn::J || f == OracleFn::Jp); }

Certified eval_certified(OracleFn f, double nu, cdouble z, const PrecisionBudget& b)
{
  check_args(nu, z);
  int need = need_j;
  if (needs_jm(f)) {
    check_nonint(nu);
    need |= need_jm;
  }
  return certify(
      [&] {
        BesselAll all = bessel_all(nu, z, need);
        MC v = pick(all, f);
        Outputs o;
        o.v.push_back(v);
        o.loss_bits = std::max(all.loss, log2_abs(all.J) - log2_abs(v));
        return o;
      },
      b);
}

std::string mr_str(const MR& x, int digits)
{
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, x.p());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

int err_exp_of(double log2v) { return static_cast<int>(std::ceil(log2v * 0.30102999566398120)); }

struct AiryM {
  MC ai, aip;
  double loss;
};

AiryM airy_series(const MC& w)
{
  MR three(3.0);
  MR c1 = MR(1.0) / (m_cbrt(three * three) * m_gamma(MR(2.0) / three));
  MR c2 = MR(1.0) / (m_cbrt(three) * m_gamma(MR(1.0) / three));
  MC w3 = w * w * w;
  MR w3a = m_abs(w3);
  MC f(MR(1.0), MR(0.0)), g = w;
  MC fs = f, gs = g;
  MC fds(MR(0.0), MR(0.0)), gds(MR(1.0), MR(0.0));
  double max_t = 0;
  const double eps_log2 = -static_cast<double>(g_prec) - 8;
  // f_k = f_{k-1} w^3 / ((3k-1) 3k), g_k = g_{k-1} w^3 / (3k (3k+1)),
  // 3k f_k / w = f_{k-1} w^2 / (3k-1), (3k+1) g_k / w = g_{k-1} w^2 / (3k).
  MC fprev = f, gprev = g;
  MC w2 = w * w;
  for (long k = 1;; ++k) {
    double kd = static_cast<double>(k);
    MC fd_term = fprev * w2 / MR(3 * kd - 1);
    MC fnew = fprev * w3 / MR((3 * kd - 1) * 3 * kd);
    MC gnew = gprev * w3 / MR(3 * kd * (3 * kd + 1));
    MC gd_term = gprev * w2 / MR(3 * kd);
    fs = fs + fnew;
    gs = gs + gnew;
    fds = fds + fd_term;
    gds = gds + gd_term;
    fprev = fnew;
    gprev = gnew;
    max_t = std::max({max_t, log2_abs(fnew), log2_abs(gnew), log2_abs(fd_term), log2_abs(gd_term)});
    double ratio = w3a.d() / ((3 * kd + 2) * (3 * kd + 3));
    if (ratio < 0.5) {
      MC ai = c1 * fs - c2 * gs;
      MC aip = c1 * fds - c2 * gds;
      bool small = log2_abs(fnew) - log2_abs(ai) < eps_log2 && log2_abs(gnew) - log2_abs(ai) < eps_log2 &&
                   log2_abs(fd_term) - log2_abs(aip) < eps_log2 &&
                   log2_abs(gd_term) - log2_abs(aip) < eps_log2;
      if (small) {
        double loss = std::max(0.0, max_t - std::min(log2_abs(ai), log2_abs(aip)));
        return {ai, aip, loss};
      }
    }
    if (k > 100000) throw precision_error("oracle: Airy series did not terminate");
  }
}

}  // namespace

const char* oracle_tag(OracleFn f)
{
  switch (f) {
    case OracleFn::J: return "J";
    case OracleFn::Y: return "Y";
    case OracleFn::H1: return "H1";
    case OracleFn::H2: return "H2";
    case OracleFn::Jp: return "Jp";
    case OracleFn::Yp: return "Yp";
    case OracleFn::H1p: return "H1p";
    case OracleFn::H2p: return "H2p";
  }
  return "?";
}

std::optional<OracleFn> oracle_fn_from_tag(const std::string& tag)
{
  for (OracleFn f : {OracleFn::J, OracleFn::Y, OracleFn::H1, OracleFn::H2, OracleFn::Jp,
                     OracleFn::Yp, OracleFn::H1p, OracleFn::H2p})
    if (tag == oracle_tag(f)) return f;
  return std::nullopt;
}

OracleValue oracle_eval(OracleFn f, double nu, cdouble z, const PrecisionBudget& b)
{
  Certified c = eval_certified(f, nu, z, b);
  PrecScope s(c.bits);
  OracleValue out;
  out.value = c.v[0].c();
  out.err_exp = err_exp_of(std::max(c.err_log2, -static_cast<double>(c.bits)));
  out.bits = static_cast<int>(c.bits);
  return out;
}

OracleDigits oracle_eval_digits(OracleFn f, double nu, cdouble z, int digits, const PrecisionBudget& b)
{
  PrecisionBudget bb = b;
  bb.working_digits = std::max(b.working_digits, digits + 10);
  bb.target_rel = std::min(b.target_rel, std::pow(10.0, -digits));
  Certified c = eval_certified(f, nu, z, bb);
  PrecScope s(c.bits);
  return {mr_str(c.v[0].re, digits), mr_str(c.v[0].im, digits),
          err_exp_of(std::max(c.err_log2, -static_cast<double>(c.bits)))};
}

cdouble j_ref(double nu, cdouble z, const PrecisionBudget& b) { return oracle_eval(OracleFn::J, nu, z, b).value; }
cdouble y_ref(double nu, cdouble z, const PrecisionBudget& b) { return oracle_eval(OracleFn::Y, nu, z, b).value; }
cdouble h1_ref(double nu, cdouble z, const PrecisionBudget& b) { return oracle_eval(OracleFn::H1, nu, z, b).value; }
cdouble h2_ref(double nu, cdouble z, const PrecisionBudget& b) { return oracle_eval(OracleFn::H2, nu, z, b).value; }
cdouble jp_ref(double nu, cdouble z, const PrecisionBudget& b) { return oracle_eval(OracleFn::Jp, nu, z, b).value; }
cdouble h1p_ref(double nu, cdouble z, const PrecisionBudget& b) { return oracle_eval(OracleFn::H1p, nu, z, b).value; }

AiryRef airy_ref(cdouble w, const PrecisionBudget& b)
{
  Certified c = certify(
      [&] {
        AiryM a = airy_series(MC(w));
        return Outputs{{a.ai, a.aip}, a.loss};
      },
      b);
  PrecScope s(c.bits);
  return {c.v[0].c(), c.v[1].c()};
}

double oracle_wronskian_residual(double nu, cdouble z, const PrecisionBudget& b)
{
  check_args(nu, z);
  check_nonint(nu);
  Certified c = certify(
      [&] {
        BesselAll a = bessel_all(nu, z, need_j | need_jm);
        MC h1 = pick(a, OracleFn::H1), h1p = pick(a, OracleFn::H1p);
        MC w = MR(nu) * MC(z);
        // (J H1' - J' H1) pi w / (2i)
        MC lhs = (a.J * h1p - a.Jp * h1) * (m_pi() * w) / MC(MR(0.0), MR(2.0));
        return Outputs{{a.J, a.Jp, h1, h1p, lhs}, a.loss};
      },
      b);
  PrecScope s(c.bits);
  MC d = c.v[4] - MC(MR(1.0), MR(0.0));
  return m_abs(d).d();
}

ABRef ab_ref(double nu, cdouble z, const PrecisionBudget& b)
{
  check_args(nu, z);
  check_nonint(nu);
  if (z.imag() < 0.0) throw domain_error("ab_ref: needs Im z >= 0");
  if (z.real() <= 0.0 && z.imag() == 0.0) throw domain_error("ab_ref: z on (-inf, 0]");
  Certified c = certify(
      [&] {
        MC zz(z);
        MC one(MR(1.0), MR(0.0));
        MC delta = m_sqrt(one - zz * zz);
        // Limit from above on (1, inf): delta = -i (x^2 - 1)^{1/2}
        if (z.imag() == 0.0 && z.real() > 1.0)
          delta = MC(MR(0.0), -m_sqrt(zz.re * zz.re - MR(1.0)));
        MC xi = m_log((one + delta) / zz) - delta;
        // arg xi in [-3pi/2, 0] on the closed upper half plane
        MR r = m_abs(xi);
        MR th = m_atan2(xi.im, xi.re);
        MR pi = m_pi();
        if (mpfr_sgn(th.p()) > 0) th = th - MR(2.0) * pi;
        MR three(3.0), two(2.0);
        MC zeta;
        if (z != cdouble(1.0)) {
          MR r15 = three / two * r;
          MR zr = m_exp(two / three * m_log(r15));
          zeta = m_polar(zr, two / three * th);
        }
        MR nu23 = m_exp(two / three * m_log(MR(nu)));
        MC warg = nu23 * zeta;
        MR third = two * pi / three;
        MC rot_p = m_polar(MR(1.0), -third);  // e^{-2 pi i/3}, Ai_1
        MC rot_m = m_polar(MR(1.0), third);   // e^{+2 pi i/3}, Ai_{-1}
        AiryM a1 = airy_series(rot_p * warg);
        AiryM am = airy_series(rot_m * warg);
        MC ai1 = a1.ai, ai1p = rot_p * a1.aip;
        MC aim = am.ai, aimp = rot_m * am.aip;
        BesselAll bs = bessel_all(nu, z, need_j | need_jm);
        MC h1 = pick(bs, OracleFn::H1), h2 = pick(bs, OracleFn::H2);
        MC ep = m_polar(MR(1.0), pi / three), em = m_polar(MR(1.0), -pi / three);
        MC twopi_i(MR(0.0), two * pi);
        MC A = -(twopi_i * (ep * h1 * ai1p - em * h2 * aimp));
        MC B = twopi_i * (ep * h1 * ai1 - em * h2 * aim);
        double loss = std::max({bs.loss, a1.loss, am.loss,
                                log2_abs(h1 * ai1p) - log2_abs(A), log2_abs(h1 * ai1) - log2_abs(B),
                                z == cdouble(1.0) ? 0.0 : -log2_abs(xi)});
        return Outputs{{A, B}, loss};
      },
      b);
  PrecScope s(c.bits);
  return {c.v[0].c(), c.v[1].c()};
}

double wronskian_residual(cdouble J, cdouble Jp, cdouble H1, cdouble H1p, double nu, cdouble z)
{
  const cdouble w = nu * z;
  cdouble lhs = (J * H1p - Jp * H1) * (M_PI * w) / cdouble(0.0, 2.0);
  return std::abs(lhs - 1.0);
}

OracleCache::OracleCache(std::string path) : path_(std::move(path)) { load(path_); }

bool OracleCache::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  std::lock_guard<std::mutex> lk(mu_);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double nu, zr, zi, vr, vi;
    std::string tag;
    int e;
    if (!(ss >> nu >> zr >> zi >> tag >> vr >> vi >> e)) continue;
    auto f = oracle_fn_from_tag(tag);
    if (!f) continue;
    data_[Key{nu, zr, zi, static_cast<int>(*f)}] = Entry{{vr, vi}, e};
  }
  return true;
}

void OracleCache::save(const std::string& path) const
{
  std::lock_guard<std::mutex> lk(mu_);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write oracle cache " + path);
  out << "# nu re_z im_z tag re_value im_value err_exp\n";
  char buf[256];
  for (const auto& [k, v] : data_) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %s %.17e %.17e %d\n", std::get<0>(k),
                  std::get<1>(k), std::get<2>(k), oracle_tag(static_cast<OracleFn>(std::get<3>(k))),
                  v.value.real(), v.value.imag(), v.err_exp);
    out << buf;
  }
}

std::optional<cdouble> OracleCache::find(double nu, cdouble z, OracleFn f) const
{
  std::lock_guard<std::mutex> lk(mu_);
  auto it = data_.find(Key{nu, z.real(), z.imag(), static_cast<int>(f)});
  if (it == data_.end()) return std::nullopt;
  return it->second.value;
}

void OracleCache::insert(double nu, cdouble z, OracleFn f, const OracleValue& v)
{
  std::lock_guard<std::mutex> lk(mu_);
  data_[Key{nu, z.real(), z.imag(), static_cast<int>(f)}] = Entry{v.value, v.err_exp};
}

cdouble OracleCache::get(double nu, cdouble z, OracleFn f, bool compute, const PrecisionBudget& b)
{
  if (auto v = find(nu, z, f)) return *v;
  if (!compute) throw std::out_of_range("oracle cache miss");
  OracleValue v = oracle_eval(f, nu, z, b);
  insert(nu, z, f, v);
  return v.value;
}

std::size_t OracleCache::size() const
{
  std::lock_guard<std::mutex> lk(mu_);
  return data_.size();
}

}  // namespace tpbessel
