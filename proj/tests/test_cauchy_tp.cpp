#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "frozen_values.hpp"
#include "tpbessel/cauchy_tp.hpp"
#include "tpbessel/errors.hpp"
#include "tpbessel/oracle.hpp"

using namespace tpbessel;

namespace {

cdouble fz(frozen::Frozen f) { return {f.re, f.im}; }

const ContourTable& default_table()
{
  static const ContourTable t = ContourTable::build(ContourSpec::default_spec());
  return t;
}

const ContourTable& compact_table()
{
  static const ContourTable t = ContourTable::build(ContourSpec::compact());
  return t;
}

using LD = long double;

// Least squares by normal equations in long double; returns coefficients and
// their standard errors.
std::vector<LD> least_squares(const std::vector<std::vector<LD>>& X, const std::vector<LD>& y, std::vector<LD>& se)
{
  const int n = static_cast<int>(X.size()), p = static_cast<int>(X[0].size());
  std::vector<std::vector<LD>> a(p, std::vector<LD>(2 * p + 1, 0));
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < n; ++k) a[i][j] += X[k][i] * X[k][j];
    for (int k = 0; k < n; ++k) a[i][p] += X[k][i] * y[k];
    a[i][p + 1 + i] = 1;
  }
  for (int c = 0; c < p; ++c) {
    int piv = c;
    for (int r = c + 1; r < p; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (int r = 0; r < p; ++r) {
      if (r == c) continue;
      LD f = a[r][c] / a[c][c];
      for (int j = c; j < 2 * p + 1; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<LD> b(p);
  for (int i = 0; i < p; ++i) b[i] = a[i][p] / a[i][i];
  LD rss = 0;
  for (int k = 0; k < n; ++k) {
    LD f = 0;
    for (int i = 0; i < p; ++i) f += X[k][i] * b[i];
    rss += (y[k] - f) * (y[k] - f);
  }
  se.assign(p, 0);
  for (int i = 0; i < p; ++i) se[i] = std::sqrt(rss / (n - p) * a[i][p + 1 + i] / a[i][i]);
  return b;
}

}  // namespace

TEST_CASE("sinhc")
{
  CHECK(sinhc(cdouble(0.0)) == cdouble(1.0));
  CHECK(sinhc(cdouble(1.0)).real() == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(std::abs(sinhc(cdouble(1.0)).real() - 1.1752011936438014) < 1e-15);
  for (double a = 0; a < 2 * M_PI; a += 0.4) {
    cdouble in = 0.4999999 * std::polar(1.0, a), out = 0.5000001 * std::polar(1.0, a);
    CHECK(std::abs(sinhc(in) - std::sinh(in) / in) <= 1e-15);
    CHECK(std::abs(sinhc(out) - sinhc(in)) <= 1e-7);
  }
  // the series removes the cancellation of sinh(x)/x near 0
  CHECK(std::abs(sinhc(cdouble(1e-9, 1e-9)) - 1.0) < 1e-17);
}

TEST_CASE("contour spec validation")
{
  CHECK_NOTHROW(ContourSpec::default_spec().validate());
  CHECK_NOTHROW(ContourSpec::compact().validate());
  CHECK_THROWS_AS(ContourSpec({{0.5, 0.0}, 0.6, 100, 7}).validate(), tpbessel::spec_error);  // contains 0
  CHECK_THROWS_AS(ContourSpec({{3.0, 0.0}, 1.5, 100, 7}).validate(), tpbessel::spec_error);  // misses 1
  CHECK_THROWS_AS(ContourSpec({{2.0, 0.0}, 1.8, 4, 7}).validate(), tpbessel::spec_error);
  CHECK_THROWS_AS(ContourSpec({{2.0, 0.0}, 1.8, 500, 0}).validate(), tpbessel::spec_error);
  CHECK_THROWS_AS(ContourSpec({{2.0, 0.0}, -1.0, 500, 7}).validate(), tpbessel::spec_error);
  CHECK_THROWS_AS(ContourTable::build({{0.5, 0.0}, 0.6, 100, 7}), tpbessel::spec_error);
}

TEST_CASE("table layout and Schwarz pairing")
{
  const auto& t = default_table();
  REQUIRE(t.size() == 500);
  CHECK(t.nodes()[0].t == cdouble(3.8, 0.0));
  CHECK(t.nodes()[250].t == cdouble(2.0 - 1.8, 0.0));
  for (int k = 1; k < 500; ++k) {
    const auto& a = t.nodes()[k];
    const auto& b = t.nodes()[500 - k];
    CHECK(a.t == std::conj(b.t));
    for (int s = 1; s <= 14; ++s) CHECK(std::abs(a.ehat[s] - std::conj(b.ehat[s])) <= 1e-15 * std::abs(a.ehat[s]));
    CHECK(a.map.zeta == std::conj(b.map.zeta));
  }
}

TEST_CASE("export_table writes one line per node")
{
  const auto& t = compact_table();
  std::string s = export_table(t);
  std::istringstream in(s);
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line[0] == '#') {
      ++comments;
      continue;
    }
    ++rows;
    std::istringstream ls(line);
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    // theta, t, zeta, xi, sheet, 14 complex E^_s
    CHECK(v.size() == 1 + 2 + 2 + 2 + 1 + 28);
    if (rows == 1) {
      CHECK(v[0] == 0.0);
      CHECK(v[1] == 1.5);
      CHECK(v[7] == 1.0);
    }
  }
  CHECK(comments == 2);
  CHECK(rows == 150);
  CHECK(s.find("1.5000000000000000e+00") != std::string::npos);
}

TEST_CASE("A(nu, 1) = 2^{4/3} nu^{-1/3} (1 + O(nu^{-2}))")
{
  const auto& t = default_table();
  for (double nu : {20.0, 50.0, 100.0, 200.0}) {
    cdouble a = coeff_A(t, nu, 1.0);
    double r = a.real() * std::cbrt(nu) / std::pow(2.0, 4.0 / 3.0);
    CAPTURE(nu);
    // measured coefficient of nu^{-2} is 4.44e-3
    CHECK(std::abs(r - 1.0) <= 5e-3 / (nu * nu));
    CHECK(std::abs(r - 1.0) >= 4e-3 / (nu * nu));
  }
}

TEST_CASE("2 J_nu(nu) = Ai(0) A + Ai'(0) B against the oracle")
{
  const auto& t = default_table();
  for (double nu : {20.25, 50.0, 100.25}) {
    TPCoeffs c = eval_airy_type(t, nu, 1.0).coeffs;
    AiryPair a = airy_eval(0.0);
    cdouble j2 = a.value * c.A + a.derivative * c.B;
    CAPTURE(nu);
    CHECK(rel_err(j2, 2.0 * j_ref(nu, 1.0)) <= 1e-14);
  }
}

TEST_CASE("A, B against the exact Hankel-Airy products")
{
  const auto& t = default_table();
  TPCoeffs c = eval_airy_type(t, 20.5, cdouble(1.0, 0.1)).coeffs;
  CHECK(rel_err(c.A, fz(frozen::A_20p5_1p01i)) <= 1e-13);
  CHECK(rel_err(c.B, fz(frozen::B_20p5_1p01i)) <= 1e-12);
  TPCoeffs d = eval_airy_type(t, 20.5, 1.02).coeffs;
  CHECK(rel_err(d.A, fz(frozen::A_20p5_1p02)) <= 1e-13);
  CHECK(rel_err(d.B, fz(frozen::B_20p5_1p02)) <= 1e-12);
}

TEST_CASE("coefficients are real on the real axis")
{
  const auto& t = default_table();
  TPCoeffs c = eval_airy_type(t, 50.0, 0.9).coeffs;
  CHECK(std::abs(c.A.imag()) <= 1e-13 * std::abs(c.A));
  CHECK(std::abs(c.B.imag()) <= 1e-13 * std::abs(c.B));
  for (double x : {0.5, 1.0, 1.3, 2.5}) {
    TPCoeffs e = eval_airy_type(t, 30.25, x).coeffs;
    CAPTURE(x);
    CHECK(std::abs(e.A.imag()) <= 1e-13 * std::abs(e.A));
    CHECK(std::abs(e.B.imag()) <= 1e-13 * std::abs(e.B));
    CHECK(std::abs(e.C.imag()) <= 1e-13 * std::abs(e.C));
    CHECK(std::abs(e.D.imag()) <= 1e-13 * std::abs(e.D));
  }
}

TEST_CASE("Schwarz symmetry of A, B, C, D")
{
  const auto& t = default_table();
  for (cdouble z : {cdouble(1.0, 0.2), cdouble(0.6, 0.5), cdouble(2.4, 1.1), cdouble(1.2, 0.05)}) {
    for (double nu : {10.25, 77.0}) {
      TPCoeffs a = eval_airy_type(t, nu, z).coeffs, b = eval_airy_type(t, nu, std::conj(z)).coeffs;
      CAPTURE(z);
      CHECK(rel_err(b.A, std::conj(a.A)) <= 1e-13);
      CHECK(rel_err(b.B, std::conj(a.B)) <= 1e-13);
      CHECK(rel_err(b.C, std::conj(a.C)) <= 1e-13);
      CHECK(rel_err(b.D, std::conj(a.D)) <= 1e-13);
    }
  }
}

TEST_CASE("scaling: B nu^{5/3}, C nu^{1/3}, D nu^{-1/3} over nu in [10, 200]")
{
  const auto& t = default_table();
  double bmin = 1e300, bmax = 0, cmin = 1e300, cmax = 0, dmin = 1e300, dmax = 0;
  for (double nu = 10; nu <= 200; nu *= 1.2) {
    double b = std::abs(coeff_B(t, nu, 1.1)) * std::pow(nu, 5.0 / 3.0);
    TPCoeffs c = eval_airy_type(t, nu, 1.05).coeffs;
    double cc = std::abs(c.C) * std::cbrt(nu), dd = std::abs(c.D) / std::cbrt(nu);
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
    cmin = std::min(cmin, cc);
    cmax = std::max(cmax, cc);
    dmin = std::min(dmin, dd);
    dmax = std::max(dmax, dd);
  }
  CHECK(bmax / bmin < 1.01);
  CHECK(cmax / cmin < 1.01);
  CHECK(dmax / dmin < 1.01);
  CHECK(dmin > 1.0);
}

TEST_CASE("nu parity: A nu^{1/3} has only even powers of 1/nu")
{
  const auto& t = default_table();
  for (cdouble z : {cdouble(1.05, 0.0), cdouble(1.0, 0.1)}) {
    std::vector<std::vector<LD>> x5, x7;
    std::vector<LD> y;
    for (int k = 0; k <= 36; ++k) {
      double nu = 20.0 + 5.0 * k;
      y.push_back((coeff_A(t, nu, z) * std::cbrt(nu)).real());
      std::vector<LD> row;
      LD v = 1;
      for (int i = 0; i < 7; ++i, v *= 20.0L / nu) row.push_back(v);
      x7.push_back(row);
      row.resize(5);
      x5.push_back(row);
    }
    std::vector<LD> se5, se7;
    auto b5 = least_squares(x5, y, se5);
    auto b7 = least_squares(x7, y, se7);
    CAPTURE(z);
    for (int k : {1, 3}) {
      // fit noise: change with the model order plus the standard error
      LD noise = std::fabs(b5[k] - b7[k]) + 2 * se5[k];
      CAPTURE(k);
      CHECK(std::fabs(b5[k]) <= 3 * noise);
      CHECK(std::fabs(b5[k]) <= 1e-5 * std::fabs(b5[2]));
    }
  }
}

TEST_CASE("eval_airy_type examples")
{
  const auto& t = default_table();
  EvalResult r = eval_airy_type(t, 100.25, cdouble(1.0, 0.1));
  CHECK(rel_err(r.H1, fz(frozen::H1_100p25_1p01i)) <= 1e-12);
  CHECK(rel_err((r.H1 + r.H2) / 2.0, r.J) <= 1e-14);
  CHECK(r.m == 7);
  CHECK(r.N == 500);
  CHECK(r.est_discretization < 1e-20);
  CHECK_FALSE(r.airy_overflow);

  EvalResult o = eval_airy_type(t, 50.0, 0.45);
  CHECK(rel_err(o.J, lg_j(50.0, 0.45)) <= 1e-12);
  CHECK(rel_err(o.J, fz(frozen::J_50_045)) <= 1e-12);

  EvalResult h = eval_airy_type(t, 20.5, 0.9);
  CHECK(rel_err(h.H1, fz(frozen::H1_20p5_09)) <= 1e-13);
  CHECK(rel_err(h.H1p, fz(frozen::H1p_20p5_09)) <= 1e-13);
  CHECK(rel_err(h.Y, (h.H1 - h.H2) / cdouble(0, 2)) == 0.0);
}

TEST_CASE("cylinder Wronskian from C and D")
{
  // J with the recessive Hankel function: H1 on and above the real axis, H2
  // below it (there J and H1 are both dominant and nearly proportional)
  const auto& t = default_table();
  for (double nu : {20.5, 100.25})
    for (cdouble z : {cdouble(1.0, 0.0), cdouble(0.8, 0.2), cdouble(1.25, 0.15), cdouble(1.25, -0.15),
                      cdouble(0.9, -0.25)}) {
      EvalResult r = eval_airy_type(t, nu, z);
      CAPTURE(nu);
      CAPTURE(z);
      if (z.imag() >= 0.0) {
        CHECK(wronskian_residual(r.J, r.Jp, r.H1, r.H1p, nu, z) <= 1e-11);
      } else {
        cdouble w = nu * z;
        cdouble W = r.J * r.H2p - r.Jp * r.H2;
        CHECK(rel_err(W, cdouble(0, -2) / (M_PI * w)) <= 1e-11);
      }
    }
}

TEST_CASE("guards: nu_min and the contour margin")
{
  const auto& t = default_table();
  CHECK_THROWS_AS(eval_airy_type(t, 4.0, 1.0), tpbessel::guard_error);
  CHECK_THROWS_AS(eval_airy_type(t, 50.0, cdouble(3.75, 0.0)), tpbessel::guard_error);
  CHECK_THROWS_AS(eval_airy_type(t, 50.0, cdouble(0.1, 0.0)), tpbessel::guard_error);
  CHECK_NOTHROW(eval_airy_type(t, 50.0, cdouble(3.7, 0.0)));
  CauchyOptions loose;
  loose.nu_min = 1.0;
  CHECK_NOTHROW(eval_airy_type(t, 4.0, 1.0, loose));
}

TEST_CASE("AiryTypeEvaluator chooses the table and caches node values")
{
  AiryTypeEvaluator ev;
  CHECK(&ev.table_for(1.0) == &ev.primary());
  CHECK_THROWS_AS(ev.table_for(cdouble(5.0, 0.0)), tpbessel::guard_error);
  EvalResult a = ev.eval(30.25, cdouble(1.0, 0.2));
  EvalResult b = eval_airy_type(default_table(), 30.25, cdouble(1.0, 0.2));
  CHECK(a.H1 == b.H1);
  CHECK(ev.eval(30.25, cdouble(1.0, 0.2)).J == a.J);

  // a primary that misses the neighbourhood of 1 - 0.45i leaves it to the compact table
  AiryTypeEvaluator ev2({}, {{2.5, 0.0}, 1.6, 500, 7});
  CHECK(&ev2.table_for(cdouble(1.0, -0.45)) != &ev2.primary());
  EvalResult c = ev2.eval(30.25, cdouble(1.0, -0.45));
  EvalResult d = eval_airy_type(compact_table(), 30.25, cdouble(1.0, -0.45));
  CHECK(c.H2 == d.H2);
}

TEST_CASE("self-convergence: N = 500 vs N = 1000")
{
  const auto& t = default_table();
  ContourTable t2 = ContourTable::build({{2.0, 0.0}, 1.8, 1000, 7});
  for (double nu : {10.25, 30.25, 100.25})
    for (cdouble z : {cdouble(1.0, 0.1), cdouble(0.7, 0.3), cdouble(1.4, -0.5), cdouble(1.0, 0.0)}) {
      TPCoeffs a = eval_airy_type(t, nu, z).coeffs, b = eval_airy_type(t2, nu, z).coeffs;
      CAPTURE(nu);
      CAPTURE(z);
      CHECK(rel_err(a.A, b.A) <= 1e-14);
      CHECK(rel_err(a.B, b.B) <= 1e-14);
      CHECK(rel_err(a.C, b.C) <= 1e-14);
      CHECK(rel_err(a.D, b.D) <= 1e-14);
    }
}

TEST_CASE("compact table: 15 digits with N = 150")
{
  const auto& t = compact_table();
  for (double nu : {20.25, 100.25})
    for (cdouble z : {cdouble(1.0, 0.0), cdouble(1.2, 0.2), cdouble(0.8, -0.1)}) {
      EvalResult r = eval_airy_type(t, nu, z);
      cdouble ref = oracle_eval(OracleFn::H1, nu, z).value;
      CAPTURE(nu);
      CAPTURE(z);
      CHECK(rel_err(r.H1, ref) <= 1e-13);
    }
}

TEST_CASE("loop closure of the node integrands")
{
  for (double nu : {5.25, 10.25, 50.25, 200.25}) {
    CAPTURE(nu);
    CHECK(loop_closure_defect(default_table(), nu) <= 1e-13);
  }
  // near t = 1.5 the stabilized sums cancel strongly; at nu <= 10 rounding in
  // them exceeds 1e-13 on the compact loop
  for (double nu : {20.25, 50.25, 200.25}) {
    CAPTURE(nu);
    CHECK(loop_closure_defect(compact_table(), nu) <= 1e-13);
  }
}

// B at t = 3.8 is a difference of two terms 2.8e3 times larger than B, so the
// exponents of the Hankel and Airy factors have to cancel exactly.
TEST_CASE("direct_AB at nu = 50, t = 3.8 matches the node integrands to 1e-10")
{
  const auto& n0 = default_table().nodes()[0];
  auto ab = node_integrands<double>(n0.map, n0.ehat.data(), n0.xi_inv.data(), 50.0, 7);
  DirectAB d = direct_AB(50.0, 3.8);
  CHECK(d.used == DirectForm::hankel);
  CHECK(rel_err(d.A, ab.A) <= 1e-10);
  CHECK(rel_err(d.B, ab.B) <= 1e-10);
}

TEST_CASE("node integrands at t = 3.8 against the exact products")
{
  const auto& n0 = default_table().nodes()[0];
  auto ab = node_integrands<double>(n0.map, n0.ehat.data(), n0.xi_inv.data(), 50.0, 7);
  CHECK(rel_err(ab.A, fz(frozen::A_50_3p8)) <= 1e-14);
  CHECK(rel_err(ab.B, fz(frozen::B_50_3p8)) <= 1e-14);
  DirectAB d = direct_AB(50.0, 3.8);
  CHECK(rel_err(d.A, fz(frozen::A_50_3p8)) <= 1e-10);
}

TEST_CASE("direct_AB inside the eye: the eye form keeps its digits")
{
  ABRef ref = ab_ref(50.25, 0.5);
  DirectAB eye = direct_AB(50.25, 0.5);
  CHECK(eye.used == DirectForm::eye);
  CHECK(rel_err(eye.A, ref.A) <= 1e-12);
  CHECK(rel_err(eye.B, ref.B) <= 1e-9);
  DirectAB hk = direct_AB(50.25, 0.5, DirectForm::hankel);
  CHECK(rel_err(hk.A, ref.A) > 1e3);
  CHECK(std::isfinite(std::abs(eye.B)));
}

TEST_CASE("direct_AB Schwarz reflection")
{
  for (cdouble t : {cdouble(3.0, 1.0), cdouble(0.6, 0.8), cdouble(2.0, 1.8)}) {
    DirectAB a = direct_AB(40.25, t), b = direct_AB(40.25, std::conj(t));
    CHECK(b.A == std::conj(a.A));
    CHECK(b.B == std::conj(a.B));
  }
}

TEST_CASE("extended-precision path")
{
  auto t = ContourTableT<ext_real>::build(ContourSpec::compact());
  auto nodes = assemble_nodes<ext_real>(t, ext_real(20.25));
  auto v = eval_airy_type_generic<ext_real>(t, nodes, ext_complex(1, 0));
  OracleDigits d = oracle_eval_digits(OracleFn::J, 20.25, 1.0, 40);
  ext_real ref(d.re);
  double err = static_cast<double>(abs(v.J - ext_complex(ref, ext_real(d.im))) / abs(ref));
  // truncation error of the n = 14 expansion, C_15 / nu^15 with C_15 ~ 1e-2
  CHECK(err < 1e-21);
  CHECK(err > 1e-24);
  EvalResult r = eval_airy_type(compact_table(), 20.25, 1.0);
  CHECK(rel_err(r.J, to_cdouble<ext_real>(v.J)) <= 1e-15);
  CHECK_THROWS_AS(eval_airy_type_generic<ext_real>(t, nodes, ext_complex(0.55, 0)), tpbessel::guard_error);
}
