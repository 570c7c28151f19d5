#include "tpbessel/cauchy_tp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tpbessel/errors.hpp"
#include "tpbessel/lg_coeffs.hpp"
#include "tpbessel/rational.hpp"

namespace tpbessel {

using std::abs;

namespace {

// a_s / s and a~_s / s in the working precision.
template <class R> struct DCoeffs {
  std::vector<R> d, dt;  // index 1..s_max
  DCoeffs()
  {
    const ExpCoeffs& e = default_exp_coeffs();
    d.assign(e.count + 1, R(0));
    dt.assign(e.count + 1, R(0));
    for (int s = 1; s <= e.count; ++s) {
      d[s] = rational_to<R>(e.a[s] / Rational(s));
      dt[s] = rational_to<R>(e.a_tilde[s] / Rational(s));
    }
  }
};

template <class R> const DCoeffs<R>& dcoeffs()
{
  static const DCoeffs<R> c;
  return c;
}

double dist_to_negative_axis(cdouble c)
{
  if (c.real() >= 0.0) return std::abs(c);
  return std::abs(c.imag());
}

template <class R> R sqrt8() { return sqrt(R(8)); }

}  // namespace

void ContourSpec::validate() const
{
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()) || !std::isfinite(radius))
    throw spec_error("contour: non-finite parameters");
  if (!(radius > 0.0)) throw spec_error("contour: radius must be positive");
  if (nodes < 8) throw spec_error("contour: at least 8 nodes required");
  if (m < 1 || 2 * m > kDefaultSMax)
    throw spec_error("contour: m must lie in [1, " + std::to_string(kDefaultSMax / 2) + "]");
  if (!(std::abs(center - 1.0) < radius)) throw spec_error("contour: disk must contain z = 1");
  if (!(std::abs(center) > radius)) throw spec_error("contour: disk must exclude z = 0");
  if (!(dist_to_negative_axis(center) > radius))
    throw spec_error("contour: disk must avoid the negative real axis");
}

template <class R> ContourTableT<R> ContourTableT<R>::build(const ContourSpec& spec)
{
  spec.validate();
  using C = complex_t<R>;
  ContourTableT<R> tab;
  tab.spec_ = spec;
  const int N = spec.nodes;
  const int smax = 2 * spec.m;
  const auto& ev = default_evaluator<R>();
  const C zc = from_cdouble<R>(spec.center);
  const R rad = R(spec.radius);
  const bool symmetric = spec.center.imag() == 0.0;
  tab.nodes_.resize(N);

  auto fill = [&](ContourNodeT<R>& nd) {
    nd.w = nd.t - zc;
    nd.map = map_point<R>(nd.t, 1);
    nd.ehat.assign(smax + 1, C(0));
    nd.xi_inv.assign(smax + 1, C(0));
    for (int s = 1; s <= smax; ++s) nd.ehat[s] = ev.ehat(s, nd.map);
    C inv = C(1) / nd.map.xi;
    C pw = C(1);
    for (int s = 1; s <= smax; ++s) {
      pw *= inv;
      nd.xi_inv[s] = pw;
    }
  };

  const R two_pi = 2 * pi_v<R>();
  const int upper = symmetric ? N / 2 : N - 1;
  for (int k = 0; k <= upper; ++k) {
    auto& nd = tab.nodes_[k];
    nd.theta = two_pi * R(k) / R(N);
    if (symmetric && k == 0) {
      nd.t = zc + C(rad);
    } else if (symmetric && 2 * k == N) {
      nd.t = zc - C(rad);
    } else {
      nd.t = zc + C(rad * cos(nd.theta), rad * sin(nd.theta));
    }
    fill(nd);
  }
  if (symmetric) {
    for (int k = upper + 1; k < N; ++k) {
      auto& nd = tab.nodes_[k];
      nd.theta = two_pi * R(k) / R(N);
      nd.t = conj(tab.nodes_[N - k].t);
      fill(nd);
    }
  }
  return tab;
}

template <class R> bool ContourTableT<R>::contains(const C& z, double margin) const
{
  const C zc = from_cdouble<R>(spec_.center);
  return abs(z - zc) <= R(spec_.radius - margin);
}

template <class R> complex_t<R> sinhc(const complex_t<R>& x)
{
  using C = complex_t<R>;
  if (abs(x) < R(0.5)) {
    // sum x^{2k} / (2k+1)!
    C x2 = x * x;
    C term = C(1), sum = C(1);
    const R eps = eps_v<R>();
    for (int k = 1; k < 200; ++k) {
      term *= x2 / R((2 * k) * (2 * k + 1));
      sum += term;
      if (abs(term) <= eps * abs(sum)) break;
    }
    return sum;
  }
  return sinh(x) / x;
}

template <class R>
NodeAB<R> node_integrands(const MapPointT<R>& p, const complex_t<R>* ehat, const complex_t<R>* xi_inv,
                          const R& nu, int m)
{
  using C = complex_t<R>;
  const auto& dc = dcoeffs<R>();
  const R inv_nu = R(1) / nu;
  const R inv_nu2 = inv_nu * inv_nu;
  C alpha(0), alpha_t(0), beta(0), beta_t(0);
  R pw = R(1);  // nu^{-2j}
  for (int j = 0; j < m; ++j) {
    const int so = 2 * j + 1;
    beta += (ehat[so] - dc.d[so] * xi_inv[so]) * pw;
    beta_t += (ehat[so] - dc.dt[so] * xi_inv[so]) * pw;
    pw *= inv_nu2;
    const int se = 2 * j + 2;
    alpha += (ehat[se] + dc.d[se] * xi_inv[se]) * pw;
    alpha_t += (ehat[se] + dc.dt[se] * xi_inv[se]) * pw;
  }
  const R nu13 = cbrt(nu);
  const R nu53 = nu13 * nu13 * nu13 * nu13 * nu13;
  NodeAB<R> r;
  r.A = sqrt8<R>() * p.y_factor * exp(alpha_t) * cosh(beta_t * inv_nu) / nu13;
  r.B = sqrt8<R>() * beta * exp(alpha) * sinhc<R>(beta * inv_nu) / (nu53 * p.x_factor);
  return r;
}

double loop_closure_defect(const ContourTable& table, double nu)
{
  const auto& ev = default_evaluator<double>();
  const int smax = 2 * table.spec().m;
  const auto& n0 = table.nodes().front();
  // End of the loop: t(2 pi) evaluated afresh. Its rounded imaginary part is
  // slightly negative, so the map is computed on the lower-half branch.
  const auto& spec = table.spec();
  cdouble t_end = spec.center + spec.radius * std::polar(1.0, 2.0 * M_PI);
  MapPoint q = t_end.imag() < 0.0 ? map_point(t_end, 1) : flip_sheet(n0.map);
  std::vector<cdouble> eh(smax + 1), xi(smax + 1);
  cdouble inv = 1.0 / q.xi, pw = 1.0;
  for (int s = 1; s <= smax; ++s) {
    eh[s] = ev.ehat(s, q);
    pw *= inv;
    xi[s] = pw;
  }
  auto a = node_integrands<double>(n0.map, n0.ehat.data(), n0.xi_inv.data(), nu, table.spec().m);
  auto b = node_integrands<double>(q, eh.data(), xi.data(), nu, table.spec().m);
  return std::max(rel_err(b.A, a.A), rel_err(b.B, a.B));
}

template <class R> NuNodesT<R> assemble_nodes(const ContourTableT<R>& table, const R& nu)
{
  NuNodesT<R> out;
  out.nu = nu;
  const int N = table.size();
  out.A.resize(N);
  out.B.resize(N);
  out.zzB.resize(N);
  out.zA.resize(N);
  const int m = table.spec().m;
  for (int k = 0; k < N; ++k) {
    const auto& nd = table.nodes()[k];
    NodeAB<R> ab = node_integrands<R>(nd.map, nd.ehat.data(), nd.xi_inv.data(), nu, m);
    out.A[k] = ab.A;
    out.B[k] = ab.B;
    out.zzB[k] = nd.map.zeta * nd.map.zeta_prime * ab.B;
    out.zA[k] = nd.map.zeta_prime * ab.A;
  }
  return out;
}

KernelInput NuNodesSoA::input() const
{
  KernelInput in;
  in.n = static_cast<int>(tre.size());
  in.tre = tre.data();
  in.tim = tim.data();
  in.wre = wre.data();
  in.wim = wim.data();
  for (int j = 0; j < 4; ++j) {
    in.fre[j] = fre[j].data();
    in.fim[j] = fim[j].data();
  }
  return in;
}

NuNodesSoA to_soa(const ContourTable& table, const NuNodesT<double>& nodes)
{
  NuNodesSoA s;
  s.nu = nodes.nu;
  const int N = table.size();
  s.tre.resize(N);
  s.tim.resize(N);
  s.wre.resize(N);
  s.wim.resize(N);
  for (int j = 0; j < 4; ++j) {
    s.fre[j].resize(N);
    s.fim[j].resize(N);
  }
  const std::vector<cdouble>* f[4] = {&nodes.A, &nodes.B, &nodes.zzB, &nodes.zA};
  for (int k = 0; k < N; ++k) {
    const auto& nd = table.nodes()[k];
    s.tre[k] = nd.t.real();
    s.tim[k] = nd.t.imag();
    s.wre[k] = nd.w.real();
    s.wim[k] = nd.w.imag();
    for (int j = 0; j < 4; ++j) {
      s.fre[j][k] = (*f[j])[k].real();
      s.fim[j][k] = (*f[j])[k].imag();
    }
  }
  return s;
}

namespace {

void check_point(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt)
{
  if (!(nu >= opt.nu_min))
    throw guard_error("airy-type: nu below nu_min (" + std::to_string(opt.nu_min) + ")");
  if (!table.contains(z, opt.margin_fraction * table.spec().radius)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "airy-type: z = (%.6g, %.6g) outside the contour margin", z.real(),
                  z.imag());
    throw guard_error(buf);
  }
}

template <class R, class C>
TPCoeffsT<R> combine(const C s0[4], const C s1[2], const C& k0, const C& k1, bool normalized, const R& nu)
{
  const R nu13 = cbrt(nu);
  const R nu23 = nu13 * nu13;
  const R nu43 = nu23 * nu23;
  C A = s0[0], B = s0[1], zzB = s0[2], zA = s0[3], dA = s1[0], dB = s1[1];
  if (normalized) {
    dA = (dA - A * k1 / k0) / k0;
    dB = (dB - B * k1 / k0) / k0;
    A /= k0;
    B /= k0;
    zzB /= k0;
    zA /= k0;
  }
  return {A, B, dA + nu43 * zzB, dB + nu23 * zA};
}

}  // namespace

TPCoeffs tp_coeffs(const ContourTable& table, const NuNodesSoA& nodes, cdouble z, const CauchyOptions& opt)
{
  check_point(table, nodes.nu, z, opt);
  KernelOutput out;
  trapezoid_kernel(nodes.input(), z, out, opt.kernel);
  return combine<double, cdouble>(out.s0, out.s1, out.k0, out.k1, opt.normalized, nodes.nu);
}

template <class R>
TPCoeffsT<R> tp_coeffs_generic(const ContourTableT<R>& table, const NuNodesT<R>& nodes, const complex_t<R>& z,
                               bool normalized)
{
  using C = complex_t<R>;
  C s0[4] = {C(0), C(0), C(0), C(0)}, s1[2] = {C(0), C(0)}, k0(0), k1(0);
  const int N = table.size();
  for (int k = 0; k < N; ++k) {
    const auto& nd = table.nodes()[k];
    C g = nd.w / (nd.t - z);
    C h = g / (nd.t - z);
    k0 += g;
    k1 += h;
    s0[0] += nodes.A[k] * g;
    s0[1] += nodes.B[k] * g;
    s0[2] += nodes.zzB[k] * g;
    s0[3] += nodes.zA[k] * g;
    s1[0] += nodes.A[k] * h;
    s1[1] += nodes.B[k] * h;
  }
  const R inv = R(1) / R(N);
  for (auto& v : s0) v *= inv;
  for (auto& v : s1) v *= inv;
  k0 *= inv;
  k1 *= inv;
  return combine<R, C>(s0, s1, k0, k1, normalized, nodes.nu);
}

namespace {

TPCoeffs coeffs_once(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt)
{
  check_point(table, nu, z, opt);
  NuNodesSoA s = to_soa(table, assemble_nodes<double>(table, nu));
  return tp_coeffs(table, s, z, opt);
}

}  // namespace

cdouble coeff_A(const ContourTable& t, double nu, cdouble z, const CauchyOptions& o) { return coeffs_once(t, nu, z, o).A; }
cdouble coeff_B(const ContourTable& t, double nu, cdouble z, const CauchyOptions& o) { return coeffs_once(t, nu, z, o).B; }
cdouble coeff_C(const ContourTable& t, double nu, cdouble z, const CauchyOptions& o) { return coeffs_once(t, nu, z, o).C; }
cdouble coeff_D(const ContourTable& t, double nu, cdouble z, const CauchyOptions& o) { return coeffs_once(t, nu, z, o).D; }

EvalResult eval_airy_type(const ContourTable& table, const NuNodesSoA& nodes, cdouble z, const CauchyOptions& opt)
{
  const double nu = nodes.nu;
  EvalResult r;
  r.coeffs = tp_coeffs(table, nodes, z, opt);
  r.m = table.spec().m;
  r.N = table.size();
  const auto& spec = table.spec();
  r.est_discretization = std::max(std::pow(spec.radius / std::abs(spec.center), r.N),
                                  std::pow(std::abs(z - spec.center) / spec.radius, r.N));

  const cdouble zeta = map_zeta(z);
  const double nu13 = std::cbrt(nu);
  const cdouble w = nu13 * nu13 * zeta;
  AiryPair a0 = airy_eval(w);
  AiryPair am = airy_rotated(-1, w);
  AiryPair ap = airy_rotated(1, w);
  r.airy_overflow = a0.status != AiryStatus::ok || am.status != AiryStatus::ok || ap.status != AiryStatus::ok;

  const auto& c = r.coeffs;
  const cdouble em = std::polar(1.0, -M_PI / 3), ep = std::polar(1.0, M_PI / 3);
  r.H1 = em * (am.value * c.A + am.derivative * c.B);
  r.H1p = em * (am.value * c.C + am.derivative * c.D) / nu;
  r.H2 = ep * (ap.value * c.A + ap.derivative * c.B);
  r.H2p = ep * (ap.value * c.C + ap.derivative * c.D) / nu;
  r.J = 0.5 * (a0.value * c.A + a0.derivative * c.B);
  r.Jp = 0.5 * (a0.value * c.C + a0.derivative * c.D) / nu;
  const cdouble two_i(0.0, 2.0);
  r.Y = (r.H1 - r.H2) / two_i;
  r.Yp = (r.H1p - r.H2p) / two_i;
  return r;
}

template <class R>
AiryTypeValuesT<R> eval_airy_type_generic(const ContourTableT<R>& table, const NuNodesT<R>& nodes,
                                          const complex_t<R>& z, bool normalized)
{
  using C = complex_t<R>;
  AiryTypeValuesT<R> r;
  r.coeffs = tp_coeffs_generic<R>(table, nodes, z, normalized);
  const R nu13 = cbrt(nodes.nu);
  const C w = nu13 * nu13 * map_zeta<R>(z);
  if (abs(w) > R(4)) throw guard_error("airy-type (generic): |nu^{2/3} zeta| > 4");
  auto a0 = airy_rotated_series<R>(0, w);
  auto am = airy_rotated_series<R>(-1, w);
  auto ap = airy_rotated_series<R>(1, w);
  const R third = pi_v<R>() / 3;
  const C em(cos(third), -sin(third)), ep(cos(third), sin(third));
  const auto& c = r.coeffs;
  r.H1 = em * (am.first * c.A + am.second * c.B);
  r.H2 = ep * (ap.first * c.A + ap.second * c.B);
  r.J = (a0.first * c.A + a0.second * c.B) / R(2);
  return r;
}

EvalResult eval_airy_type(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt)
{
  check_point(table, nu, z, opt);
  NuNodesSoA s = to_soa(table, assemble_nodes<double>(table, nu));
  return eval_airy_type(table, s, z, opt);
}

namespace {

struct AiryProduct {
  cdouble value, derivative;  // h Ai_j(w), h Ai_j'(w)
};

// h Ai_j(nu^{2/3} zeta) with both factors in exponential form, so that the
// large exponents nu xi cancel identically instead of through two rounded
// exponentials. Falls back to the plain product when the exponents do not
// pair up or the Airy series is too short.
AiryProduct hankel_airy_product(const LGLogValue& h, int j, cdouble zeta, double nu)
{
  const double nu13 = std::cbrt(nu);
  const cdouble w = nu13 * nu13 * zeta;
  const cdouble hval = std::exp(nu * h.exponent + h.rest);
  const AiryPair plain = airy_rotated(j, w);
  const AiryProduct fallback{hval * plain.value, hval * plain.derivative};

  const cdouble rot = std::polar(1.0, -2.0 * M_PI * j / 3.0);
  const cdouble za = rot * zeta;
  if (std::abs(std::arg(za)) > 0.85 * M_PI) return fallback;
  AiryArg arg = airy_arg_principal(za);
  if (std::abs(arg.xi - h.exponent) > 1e-8 * std::abs(h.exponent)) return fallback;

  // exponents cancel exactly once the Airy factor uses the same xi
  arg.xi = h.exponent;
  constexpr int kTerms = 40;
  LGAiryResult full = lg_airy(AiryKind::Ai, nu, arg, kTerms);
  if (full.truncation > 1e-17 || rel_err(full.value, plain.value) > 1e-10) return fallback;

  AiryProduct r;
  r.value = lg_airy_scaled(AiryKind::Ai, nu, arg, kTerms, h.rest).value;
  r.derivative = rot * lg_airy_scaled(AiryKind::AiPrime, nu, arg, kTerms, h.rest).value;
  return r;
}

}  // namespace

DirectAB direct_AB(double nu, cdouble t, DirectForm form, int n, const LGGuards& guards)
{
  if (t.imag() < 0.0) {
    DirectAB r = direct_AB(nu, std::conj(t), form, n, guards);
    r.A = std::conj(r.A);
    r.B = std::conj(r.B);
    return r;
  }
  if (form == DirectForm::automatic) form = t.real() > 1.0 ? DirectForm::hankel : DirectForm::eye;
  const cdouble zeta = map_zeta(t);
  const cdouble ep = std::polar(1.0, M_PI / 3), em = std::polar(1.0, -M_PI / 3);
  const cdouble two_pi_i(0.0, 2.0 * M_PI);
  const LGLogValue h1 = lg_eval_log({nu, t, n, LGFunction::H1}, guards);
  DirectAB r;
  r.used = form;
  if (form == DirectForm::hankel) {
    AiryProduct p1 = hankel_airy_product(h1, 1, zeta, nu);
    LGGuards g = guards;
    g.quadrant = false;
    LGLogValue h1c = lg_eval_log({nu, std::conj(t), n, LGFunction::H1}, g);
    LGLogValue h2{std::conj(h1c.exponent), std::conj(h1c.rest)};
    AiryProduct pm = hankel_airy_product(h2, -1, zeta, nu);
    r.A = -two_pi_i * (ep * p1.derivative - em * pm.derivative);
    r.B = two_pi_i * (ep * p1.value - em * pm.value);
  } else {
    AiryProduct p0 = hankel_airy_product(h1, 0, zeta, nu);
    AiryProduct pm = hankel_airy_product(lg_eval_log({nu, t, n, LGFunction::J}, guards), -1, zeta, nu);
    r.A = -two_pi_i * (p0.derivative - 2.0 * em * pm.derivative);
    r.B = two_pi_i * (p0.value - 2.0 * em * pm.value);
  }
  return r;
}

std::string export_table(const ContourTable& table)
{
  std::ostringstream os;
  const auto& sp = table.spec();
  char buf[512];
  std::snprintf(buf, sizeof buf, "# center %.16e %.16e radius %.16e nodes %d m %d\n", sp.center.real(),
                sp.center.imag(), sp.radius, sp.nodes, sp.m);
  os << buf;
  os << "# theta re_t im_t re_zeta im_zeta re_xi im_xi sheet re_E1 im_E1 ...\n";
  for (const auto& nd : table.nodes()) {
    std::snprintf(buf, sizeof buf, "%.16e %.16e %.16e %.16e %.16e %.16e %.16e %d", nd.theta, nd.t.real(),
                  nd.t.imag(), nd.map.zeta.real(), nd.map.zeta.imag(), nd.map.xi.real(), nd.map.xi.imag(),
                  nd.map.sheet);
    os << buf;
    for (int s = 1; s <= 2 * sp.m; ++s) {
      std::snprintf(buf, sizeof buf, " %.16e %.16e", nd.ehat[s].real(), nd.ehat[s].imag());
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

AiryTypeEvaluator::AiryTypeEvaluator(CauchyOptions opt, ContourSpec primary, ContourSpec secondary)
    : opt_(opt), primary_(ContourTable::build(primary)), secondary_(ContourTable::build(secondary))
{
}

const ContourTable& AiryTypeEvaluator::table_for(cdouble z) const
{
  if (primary_.contains(z, opt_.margin_fraction * primary_.spec().radius)) return primary_;
  if (secondary_.contains(z, opt_.margin_fraction * secondary_.spec().radius)) return secondary_;
  char buf[128];
  std::snprintf(buf, sizeof buf, "airy-type: z = (%.6g, %.6g) is inside neither contour", z.real(), z.imag());
  throw guard_error(buf);
}

std::shared_ptr<const NuNodesSoA> AiryTypeEvaluator::nodes_for(const ContourTable& t, int which, double nu) const
{
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find({which, nu});
    if (it != cache_.end()) return it->second;
  }
  auto s = std::make_shared<const NuNodesSoA>(to_soa(t, assemble_nodes<double>(t, nu)));
  std::lock_guard<std::mutex> lk(mu_);
  return cache_.emplace(std::make_pair(which, nu), s).first->second;
}

EvalResult AiryTypeEvaluator::eval(double nu, cdouble z) const
{
  if (!(nu >= opt_.nu_min))
    throw guard_error("airy-type: nu below nu_min (" + std::to_string(opt_.nu_min) + ")");
  const ContourTable& t = table_for(z);
  int which = &t == &primary_ ? 0 : 1;
  return eval_airy_type(t, *nodes_for(t, which, nu), z, opt_);
}

#define TPB_INSTANTIATE(R)                                                                             \
  template class ContourTableT<R>;                                                                     \
  template complex_t<R> sinhc<R>(const complex_t<R>&);                                                 \
  template NodeAB<R> node_integrands<R>(const MapPointT<R>&, const complex_t<R>*, const complex_t<R>*, \
                                        const R&, int);                                                \
  template NuNodesT<R> assemble_nodes<R>(const ContourTableT<R>&, const R&);                           \
  template TPCoeffsT<R> tp_coeffs_generic<R>(const ContourTableT<R>&, const NuNodesT<R>&,              \
                                             const complex_t<R>&, bool);                               \
  template AiryTypeValuesT<R> eval_airy_type_generic<R>(const ContourTableT<R>&, const NuNodesT<R>&,   \
                                                        const complex_t<R>&, bool);

TPB_INSTANTIATE(double)
TPB_INSTANTIATE(ext_real)

}  // namespace tpbessel
