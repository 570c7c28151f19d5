#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "tpbessel/numeric.hpp"

namespace tpbessel {

// Reference values from ascending series in MPFR arithmetic. Nothing here
// calls into the asymptotic modules.

struct PrecisionBudget {
  int working_digits = 50;
  double target_rel = 1e-20;
  int max_bits = 1 << 15;
};

enum class OracleFn { J, Y, H1, H2, Jp, Yp, H1p, H2p };

const char* oracle_tag(OracleFn f);
std::optional<OracleFn> oracle_fn_from_tag(const std::string& tag);

struct OracleValue {
  cdouble value;
  int err_exp = 0;   // certified relative error <= 10^err_exp
  int bits = 0;      // precision of the accepted evaluation
};

// Decimal strings of an evaluation at high precision, for checks that go
// beyond double.
struct OracleDigits {
  std::string re, im;
  int err_exp = 0;
};

// Derivatives are with respect to w = nu z. Hankel and Y need
// |nu - round(nu)| >= 0.05.
OracleValue oracle_eval(OracleFn f, double nu, cdouble z, const PrecisionBudget& b = {});
OracleDigits oracle_eval_digits(OracleFn f, double nu, cdouble z, int digits,
                                const PrecisionBudget& b = {});

cdouble j_ref(double nu, cdouble z, const PrecisionBudget& b = {});
cdouble y_ref(double nu, cdouble z, const PrecisionBudget& b = {});
cdouble h1_ref(double nu, cdouble z, const PrecisionBudget& b = {});
cdouble h2_ref(double nu, cdouble z, const PrecisionBudget& b = {});
cdouble jp_ref(double nu, cdouble z, const PrecisionBudget& b = {});
cdouble h1p_ref(double nu, cdouble z, const PrecisionBudget& b = {});

struct AiryRef {
  cdouble ai, aip;
};

// Ai and Ai' by the Maclaurin series with adaptive precision.
AiryRef airy_ref(cdouble w, const PrecisionBudget& b = {});

// |(J H1' - J' H1) pi w / (2i) - 1| evaluated entirely at oracle precision.
double oracle_wronskian_residual(double nu, cdouble z, const PrecisionBudget& b = {});

// Turning-point coefficients A, B from the exact Hankel-Airy products,
// with zeta from the closed-form map evaluated at oracle precision.
// Needs Im z >= 0 and z off (-inf, 0].
struct ABRef {
  cdouble A, B;
};
ABRef ab_ref(double nu, cdouble z, const PrecisionBudget& b = {});

// Residual |(J H1' - J' H1) pi w / (2i) - 1| for arbitrary inputs.
double wronskian_residual(cdouble J, cdouble Jp, cdouble H1, cdouble H1p, double nu, cdouble z);

// Text cache: one record per line
//   nu re_z im_z tag re_value im_value err_exp
class OracleCache {
 public:
  OracleCache() = default;
  explicit OracleCache(std::string path);

  bool load(const std::string& path);
  void save(const std::string& path) const;
  void save() const { if (!path_.empty()) save(path_); }

  std::optional<cdouble> find(double nu, cdouble z, OracleFn f) const;
  void insert(double nu, cdouble z, OracleFn f, const OracleValue& v);
  // Cached value, or a fresh evaluation when allowed; throws
  // std::out_of_range when missing and computing is not allowed.
  cdouble get(double nu, cdouble z, OracleFn f, bool compute, const PrecisionBudget& b = {});
  std::size_t size() const;

 private:
  using Key = std::tuple<double, double, double, int>;
  struct Entry {
    cdouble value;
    int err_exp;
  };
  mutable std::mutex mu_;
  std::map<Key, Entry> data_;
  std::string path_;
};

}  // namespace tpbessel
