#include "tpbessel/lg_bessel.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>

#include "tpbessel/errors.hpp"
#include "tpbessel/lg_coeffs.hpp"

namespace tpbessel {

namespace {

std::string fmt_z(cdouble z)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", z.real(), z.imag());
  return buf;
}

double dist_to_cut(cdouble z)
{
  if (z.real() >= 1.0) return std::abs(z.imag());
  return std::abs(z - 1.0);
}

const char* fn_name(LGFunction f)
{
  switch (f) {
    case LGFunction::J: return "J";
    case LGFunction::H1: return "H1";
    case LGFunction::H2: return "H2";
  }
  return "?";
}

// Point at which the exponential form is actually evaluated, with the
// multiplier needed to return to the requested z.
struct Reduced {
  cdouble z;
  LGFunction fn;   // J or H1 only
  int neg_dir = 0; // J continuation from Re z < 0
  bool conj = false;
  int sheet = 1;
};

Reduced reduce(const LGRequest& req, const LGGuards& g)
{
  if (!(req.nu > 0.0) || !std::isfinite(req.nu))
    throw spec_error("nu must be positive and finite");
  if (req.n_terms < 0 || req.n_terms > kDefaultSMax)
    throw spec_error("n_terms must lie in [0, " + std::to_string(kDefaultSMax) + "]");
  Reduced r{req.z, req.want};
  switch (req.want) {
    case LGFunction::J:
      if (req.z.real() < 0.0) {
        r.z = -req.z;
        r.neg_dir = req.z.imag() >= 0.0 ? 1 : -1;
      }
      break;
    case LGFunction::H1:
      if (g.quadrant && (req.z.imag() < 0.0 || req.z.real() < 0.0))
        throw guard_error("H1 exponential form needs z in the closed first quadrant, got " +
                          fmt_z(req.z));
      break;
    case LGFunction::H2:
      if (g.quadrant && (req.z.imag() > 0.0 || req.z.real() < 0.0))
        throw guard_error("H2 exponential form needs z in the closed fourth quadrant, got " +
                          fmt_z(req.z));
      r.z = std::conj(req.z);
      r.fn = LGFunction::H1;
      r.conj = true;
      break;
  }
  if (r.z == cdouble(0.0)) throw domain_error("z = 0 is outside the exponential form");
  if (r.fn == LGFunction::H1 && r.z.imag() < 0.0) {
    // Below the axis H1 is continued through (1, inf) only.
    if (r.z.real() <= 1.0)
      throw guard_error("H1 below the real axis needs Re z > 1, got " + fmt_z(req.z));
    r.sheet = -1;
  }
  return r;
}

double truncation_estimate(const MapPoint& p, double nu, int n)
{
  const auto& ev = default_evaluator<double>();
  if (n + 1 > ev.s_max()) return 0.0;
  return std::abs(ev.ehat(n + 1, p)) / std::pow(nu, n + 1);
}

void check_reduced(const Reduced& r, const MapPoint& p, const LGRequest& req, const LGGuards& g)
{
  const char* name = fn_name(req.want);
  if (std::abs(p.zeta) < g.zeta_min)
    throw guard_error(std::string(name) + ": |zeta| < zeta_min at z = " + fmt_z(req.z));
  if (r.fn == LGFunction::J && dist_to_cut(r.z) < g.d_min)
    throw guard_error(std::string(name) + ": too close to [1, inf) at z = " + fmt_z(req.z));
  if (g.dominance) {
    // The dominant solution carries its recessive partner with relative
    // weight up to e^{-2 nu |Re xi|}.
    double re = p.xi.real();
    bool dominant = r.fn == LGFunction::J ? re < 0.0 : re > 0.0;
    if (dominant && -2.0 * req.nu * std::abs(re) > std::log(g.dominance_tol))
      throw guard_error(std::string(name) + ": recessive partner not negligible at z = " +
                        fmt_z(req.z));
  }
  if (g.truncation && truncation_estimate(p, req.nu, req.n_terms) > g.truncation_tol)
    throw guard_error(std::string(name) + ": series too short for nu at z = " + fmt_z(req.z));
}

}  // namespace

void lg_check_guards(const LGRequest& req, const LGGuards& guards)
{
  Reduced r = reduce(req, guards);
  MapPoint p = map_point(r.z, r.sheet);
  check_reduced(r, p, req, guards);
}

LGValue lg_eval(const LGRequest& req, const LGGuards& guards)
{
  Reduced r = reduce(req, guards);
  MapPoint p = map_point(r.z, r.sheet);
  check_reduced(r, p, req, guards);

  const auto& ev = default_evaluator<double>();
  const double nu = req.nu;
  const int n = req.n_terms;
  const bool is_j = r.fn == LGFunction::J;
  const cdouble z = p.z;

  // Exponent and log-derivative of the series part.
  cdouble sum = 0.0, dsum = 0.0;
  double nupow = 1.0;
  for (int s = 1; s <= n; ++s) {
    nupow *= nu;
    double sign = (is_j && (s & 1)) ? -1.0 : 1.0;
    sum += sign * ev.ehat(s, p) / nupow;
    dsum += sign * ev.fhat(s, p) / nupow;
  }

  const double pi = M_PI;
  cdouble quarter = std::log(std::sqrt(p.delta));  // log (1-z^2)^{1/4}
  cdouble logv;
  if (is_j)
    logv = -0.5 * std::log(2.0 * pi * nu) - quarter - nu * p.xi + sum;
  else
    logv = 0.5 * std::log(2.0 / (pi * nu)) - quarter + nu * p.xi + sum;

  LGValue out;
  out.overflow = logv.real() > 709.0 || logv.real() < -745.0;
  cdouble v = std::exp(logv);
  if (!is_j) v *= cdouble(0.0, -1.0);

  cdouble one_minus = 1.0 - z * z;
  cdouble dz_over = p.delta / z;
  cdouble L = z / (2.0 * one_minus) + (is_j ? nu : -nu) * dz_over - dz_over * dsum;
  cdouble dv = v * L / nu;

  out.truncation = truncation_estimate(p, nu, n);
  if (r.neg_dir != 0) {
    v = continue_neg_real(v, nu, r.neg_dir);
    dv = -continue_neg_real(dv, nu, r.neg_dir);
  }
  if (r.conj) {
    v = std::conj(v);
    dv = std::conj(dv);
  }
  out.value = v;
  out.derivative = dv;
  return out;
}

LGLogValue lg_eval_log(const LGRequest& req, const LGGuards& guards)
{
  Reduced r = reduce(req, guards);
  MapPoint p = map_point(r.z, r.sheet);
  check_reduced(r, p, req, guards);

  const auto& ev = default_evaluator<double>();
  const bool is_j = r.fn == LGFunction::J;
  cdouble sum = 0.0;
  double nupow = 1.0;
  for (int s = 1; s <= req.n_terms; ++s) {
    nupow *= req.nu;
    double sign = (is_j && (s & 1)) ? -1.0 : 1.0;
    sum += sign * ev.ehat(s, p) / nupow;
  }
  const double pi = M_PI;
  cdouble quarter = std::log(std::sqrt(p.delta));
  LGLogValue out;
  if (is_j) {
    out.exponent = -p.xi;
    out.rest = -0.5 * std::log(2.0 * pi * req.nu) - quarter + sum;
  } else {
    out.exponent = p.xi;
    out.rest = 0.5 * std::log(2.0 / (pi * req.nu)) - quarter + sum + cdouble(0.0, -pi / 2);
  }
  if (r.neg_dir != 0) out.rest += cdouble(0.0, r.neg_dir * pi * std::fmod(req.nu, 2.0));
  if (r.conj) {
    out.exponent = std::conj(out.exponent);
    out.rest = std::conj(out.rest);
  }
  return out;
}

cdouble lg_j(double nu, cdouble z, int n, const LGGuards& guards)
{
  return lg_eval({nu, z, n, LGFunction::J}, guards).value;
}

cdouble lg_h1(double nu, cdouble z, int n, const LGGuards& guards)
{
  return lg_eval({nu, z, n, LGFunction::H1}, guards).value;
}

cdouble lg_h2(double nu, cdouble z, int n, const LGGuards& guards)
{
  return lg_eval({nu, z, n, LGFunction::H2}, guards).value;
}

cdouble continue_neg_real(cdouble value, double nu, int direction)
{
  double c = boost::math::cos_pi(nu);
  double s = boost::math::sin_pi(nu);
  return value * cdouble(c, direction >= 0 ? s : -s);
}

}  // namespace tpbessel
