#include <cmath>
#include <cstdio>
#include <filesystem>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "frozen_values.hpp"
#include "tpbessel/errors.hpp"
#include "tpbessel/oracle.hpp"

using namespace tpbessel;
using big = boost::multiprecision::cpp_bin_float_100;

namespace {

cdouble fz(frozen::Frozen f) { return {f.re, f.im}; }

double big_rel(const OracleDigits& a, const OracleDigits& b)
{
  big ar(a.re), ai(a.im), br(b.re), bi(b.im);
  big d = sqrt((ar - br) * (ar - br) + (ai - bi) * (ai - bi));
  return static_cast<double>(d / sqrt(br * br + bi * bi));
}

}  // namespace

TEST_CASE("j_ref examples")
{
  CHECK(rel_err(j_ref(1.0, 1.0), 0.4400505857449335) <= 1e-15);
  CHECK(rel_err(j_ref(1.0, 1.0), fz(frozen::J_1_at_1)) <= 1e-15);
  // nu = 1/2, w = nu z = 2
  const double w = 2.0;
  CHECK(rel_err(j_ref(0.5, w / 0.5), std::sqrt(2.0 / (M_PI * w)) * std::sin(w)) <= 1e-15);
  CHECK(rel_err(j_ref(0.5, 4.0), fz(frozen::J_half_at_2)) <= 1e-15);
  // small z
  const double nu = 10.25, z = 1e-3;
  double lead = std::exp(nu * std::log(nu * z / 2.0) - std::lgamma(nu + 1.0));
  CHECK(j_ref(nu, z).real() / lead == doctest::Approx(1.0 - std::pow(nu * z / 2, 2) / (nu + 1)).epsilon(1e-10));
  CHECK(rel_err(j_ref(nu, z), fz(frozen::J_10p25_small)) <= 1e-15);
}

TEST_CASE("high-precision strings and certification")
{
  OracleDigits d = oracle_eval_digits(OracleFn::J, 1.0, 1.0, 40);
  CHECK(d.re.substr(0, 20) == "4.400505857449335159");
  CHECK(d.err_exp <= -40);
  OracleValue v = oracle_eval(OracleFn::J, 1.0, 1.0);
  CHECK(v.err_exp <= -20);
  CHECK(v.bits > 0);
}

TEST_CASE("h1_ref at nu = 100.25, z = 1+0.1i: 50 vs 80 digits")
{
  OracleDigits a = oracle_eval_digits(OracleFn::H1, 100.25, cdouble(1.0, 0.1), 50);
  OracleDigits b = oracle_eval_digits(OracleFn::H1, 100.25, cdouble(1.0, 0.1), 80);
  CHECK(big_rel(a, b) <= 1e-45);
  CHECK(rel_err(h1_ref(100.25, cdouble(1.0, 0.1)), fz(frozen::H1_100p25_1p01i)) <= 1e-15);
}

TEST_CASE("Wronskian at oracle precision")
{
  CHECK(oracle_wronskian_residual(20.5, 0.9) <= 1e-40);
  CHECK(oracle_wronskian_residual(100.25, cdouble(1.0, 0.1)) <= 1e-40);
}

TEST_CASE("derivatives against mpmath")
{
  CHECK(rel_err(h1_ref(20.5, 0.9), fz(frozen::H1_20p5_09)) <= 1e-15);
  CHECK(rel_err(h1p_ref(20.5, 0.9), fz(frozen::H1p_20p5_09)) <= 1e-15);
  // J' = (J_{nu-1} - J_{nu+1})/2 in w
  const double nu = 7.3;
  const cdouble z(0.8, 0.3), w = nu * z;
  cdouble jm = j_ref(nu - 1.0, w / (nu - 1.0)), jp = j_ref(nu + 1.0, w / (nu + 1.0));
  CHECK(rel_err(jp_ref(nu, z), (jm - jp) / 2.0) <= 1e-15);
}

TEST_CASE("H2 = conj H1 and Y = (H1 - H2)/2i on the real axis")
{
  cdouble h1 = h1_ref(20.5, 0.8), h2 = h2_ref(20.5, 0.8);
  CHECK(rel_err(h2, std::conj(h1)) <= 1e-16);
  cdouble y = y_ref(20.5, 0.8);
  CHECK(std::abs(y.imag()) == 0.0);
  CHECK(rel_err(y, (h1 - h2) / cdouble(0, 2)) <= 1e-15);
  CHECK(rel_err(h1, j_ref(20.5, 0.8) + cdouble(0, 1) * y) <= 1e-15);
}

TEST_CASE("argument checks")
{
  CHECK_THROWS_AS(h1_ref(100.0, cdouble(1.0, 0.1)), tpbessel::domain_error);
  CHECK_THROWS_AS(y_ref(20.02, 0.5), tpbessel::domain_error);
  CHECK_NOTHROW(j_ref(100.0, 0.5));
  CHECK_THROWS_AS(j_ref(10.0, 0.0), tpbessel::domain_error);
  CHECK_THROWS_AS(j_ref(-1.0, 0.5), tpbessel::domain_error);
  PrecisionBudget tiny;
  tiny.working_digits = 10;
  tiny.target_rel = 1e-30;
  tiny.max_bits = 64;
  CHECK_THROWS_AS(oracle_eval(OracleFn::J, 10.25, 1.0, tiny), tpbessel::precision_error);
}

TEST_CASE("airy_ref")
{
  AiryRef a = airy_ref(cdouble(5.0, 3.0));
  CHECK(rel_err(a.ai, fz(frozen::Ai_5p3i)) <= 1e-15);
  CHECK(rel_err(a.aip, fz(frozen::Aip_5p3i)) <= 1e-15);
  AiryRef b = airy_ref(-8.0);
  CHECK(rel_err(b.ai, fz(frozen::Ai_m8)) <= 1e-15);
}

TEST_CASE("ab_ref against mpmath")
{
  ABRef r = ab_ref(20.5, cdouble(1.0, 0.1));
  CHECK(rel_err(r.A, fz(frozen::A_20p5_1p01i)) <= 1e-15);
  CHECK(rel_err(r.B, fz(frozen::B_20p5_1p01i)) <= 1e-15);
  ABRef s = ab_ref(20.5, 1.02);
  CHECK(rel_err(s.A, fz(frozen::A_20p5_1p02)) <= 1e-15);
  CHECK(rel_err(s.B, fz(frozen::B_20p5_1p02)) <= 1e-15);
  CHECK_THROWS_AS(ab_ref(20.5, cdouble(1.0, -0.1)), tpbessel::domain_error);
}

TEST_CASE("wronskian_residual")
{
  const double nu = 30.0;
  const cdouble z(1.1, 0.2), w = nu * z;
  cdouble H1p = cdouble(0, 2) / (M_PI * w);
  CHECK(wronskian_residual(1.0, 0.0, cdouble(3.0, 1.0), H1p, nu, z) <= 4e-16);

  // linearization in a relative perturbation of J
  cdouble J(0.3, 0.1), Jp(0.2, -0.4), H1(1.5, 0.7);
  // choose H1' so that the identity holds exactly to rounding
  cdouble Hp = (cdouble(0, 2) / (M_PI * w) + Jp * H1) / J;
  const double eps = 1e-8;
  double r = wronskian_residual(J * (1.0 + eps), Jp, H1, Hp, nu, z);
  double predicted = eps * std::abs(J * Hp) * M_PI * std::abs(w) / 2.0;
  CHECK(r == doctest::Approx(predicted).epsilon(1e-3));
}

TEST_CASE("cache round trip")
{
  auto path = std::filesystem::temp_directory_path() / "tpbessel_oracle_cache_test.txt";
  std::filesystem::remove(path);
  {
    OracleCache c(path.string());
    CHECK(c.size() == 0);
    CHECK_FALSE(c.find(20.5, 0.9, OracleFn::H1).has_value());
    CHECK_THROWS_AS(c.get(20.5, 0.9, OracleFn::H1, false), std::out_of_range);
    cdouble v = c.get(20.5, 0.9, OracleFn::H1, true);
    CHECK(rel_err(v, fz(frozen::H1_20p5_09)) <= 1e-15);
    c.insert(1.0, 1.0, OracleFn::J, oracle_eval(OracleFn::J, 1.0, 1.0));
    c.save();
  }
  OracleCache d(path.string());
  CHECK(d.size() == 2);
  auto h = d.find(20.5, 0.9, OracleFn::H1);
  REQUIRE(h.has_value());
  CHECK(*h == h1_ref(20.5, 0.9));
  CHECK(d.find(1.0, 1.0, OracleFn::J).value() == j_ref(1.0, 1.0));
  CHECK_FALSE(d.find(1.0, 1.0, OracleFn::Jp).has_value());
  std::filesystem::remove(path);
}

TEST_CASE("tags")
{
  for (OracleFn f : {OracleFn::J, OracleFn::Y, OracleFn::H1, OracleFn::H2, OracleFn::Jp, OracleFn::Yp,
                     OracleFn::H1p, OracleFn::H2p})
    CHECK(oracle_fn_from_tag(oracle_tag(f)).value() == f);
  CHECK_FALSE(oracle_fn_from_tag("K").has_value());
}
