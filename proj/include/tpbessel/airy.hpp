#pragma once

#include <utility>
#include <vector>

#include "tpbessel/numeric.hpp"
#include "tpbessel/rational.hpp"

namespace tpbessel {

enum class AiryStatus { ok, overflow, underflow };

struct AiryPair {
  cdouble value;       // Ai(w) or Ai_j(w)
  cdouble derivative;  // Ai'(w) or Ai_j'(w)
  AiryStatus status = AiryStatus::ok;
};

// Exponential-form coefficients a_s (for Ai) and a~_s (for Ai'), index 1..count.
struct ExpCoeffs {
  std::vector<Rational> a;        // a[0] unused
  std::vector<Rational> a_tilde;  // a_tilde[0] unused
  int count = 0;
};

ExpCoeffs exp_coeffs(int s_max);

// Shared table with enough terms for every internal use.
const ExpCoeffs& default_exp_coeffs();
const std::vector<double>& exp_coeffs_a_double();
const std::vector<double>& exp_coeffs_a_tilde_double();

// |w| up to which the Maclaurin series is used.
inline constexpr double kAiryMaclaurinRadius = 9.5;

AiryPair airy_eval(cdouble w);

// (Ai_j(w), Ai_j'(w)) with Ai_j(w) = Ai(w e^{-2 pi i j/3}); j in {-1, 0, 1}.
AiryPair airy_rotated(int j, cdouble w);

// Argument for lg_airy: zeta with its tracked quarter power and xi.
struct AiryArg {
  cdouble zeta;
  cdouble zeta_quarter;  // zeta^{1/4}
  cdouble xi;            // (2/3) zeta^{3/2}
};

// Principal-branch argument, |arg zeta| < pi.
AiryArg airy_arg_principal(cdouble zeta);

// Same zeta continued once around the origin (zeta e^{2 pi i}).
AiryArg airy_arg_rotated_turn(const AiryArg& a, int turns);

enum class AiryKind { Ai, AiPrime };

struct LGAiryResult {
  cdouble value;
  double truncation = 0;  // magnitude of the first omitted term in the exponent
};

LGAiryResult lg_airy(AiryKind kind, double u, const AiryArg& arg, int s_max);

// exp(log_factor + u xi) times the lg_airy value. A caller whose own factor
// carries e^{+u xi} passes the rest of its logarithm here, so the two large
// exponentials never get formed.
LGAiryResult lg_airy_scaled(AiryKind kind, double u, const AiryArg& arg, int s_max, cdouble log_factor);

// Maclaurin series at the precision of R; usable in extended precision for
// moderate |w|.
template <class R>
std::pair<complex_t<R>, complex_t<R>> airy_maclaurin(const complex_t<R>& w);

// Rotated Airy pair in the precision of R for |w| small enough that the
// Maclaurin series is adequate at that precision.
template <class R>
std::pair<complex_t<R>, complex_t<R>> airy_rotated_series(int j, const complex_t<R>& w);

}  // namespace tpbessel
