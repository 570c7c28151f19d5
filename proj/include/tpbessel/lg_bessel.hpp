#pragma once

#include "tpbessel/complex_map.hpp"
#include "tpbessel/numeric.hpp"

namespace tpbessel {

enum class LGFunction { J, H1, H2 };

// Validity guards. zeta_min and d_min follow the documented defaults; the
// dominance and truncation guards reject points where the single-exponential
// form is contaminated by the recessive partner or the series is too short.
struct LGGuards {
  double zeta_min = 0.35;
  double d_min = 0.3;
  bool dominance = false;
  double dominance_tol = 1e-14;  // bound on e^{-2 nu |Re xi|} when dominant
  bool truncation = true;
  double truncation_tol = 1e-13;  // bound on |E^_{n+1}| / nu^{n+1}
  // H1 only in the closed first quadrant, H2 in the fourth. When off, H1 is
  // also served below (1, inf) by continuation across it (Re z > 1).
  bool quadrant = true;
};

struct LGRequest {
  double nu = 100;
  cdouble z;
  int n_terms = 14;
  LGFunction want = LGFunction::J;
};

struct LGValue {
  cdouble value;
  cdouble derivative;  // d/dw with w = nu z
  double truncation = 0;
  bool overflow = false;
};

// Throws guard_error when the request is outside the validity region.
void lg_check_guards(const LGRequest& req, const LGGuards& guards = {});

LGValue lg_eval(const LGRequest& req, const LGGuards& guards = {});

// value = exp(nu * exponent + rest), with exponent = +-xi kept apart so that
// products with Airy functions can cancel it exactly.
struct LGLogValue {
  cdouble exponent;
  cdouble rest;
};
LGLogValue lg_eval_log(const LGRequest& req, const LGGuards& guards = {});

cdouble lg_j(double nu, cdouble z, int n = 14, const LGGuards& guards = {});
cdouble lg_h1(double nu, cdouble z, int n = 14, const LGGuards& guards = {});
cdouble lg_h2(double nu, cdouble z, int n = 14, const LGGuards& guards = {});

// J_nu(z e^{+-pi i}) = e^{+-nu pi i} J_nu(z); direction = +1 or -1.
cdouble continue_neg_real(cdouble value, double nu, int direction);

}  // namespace tpbessel
