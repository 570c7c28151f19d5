#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tpbessel/airy.hpp"
#include "tpbessel/complex_map.hpp"
#include "tpbessel/kernels.hpp"
#include "tpbessel/lg_bessel.hpp"
#include "tpbessel/numeric.hpp"

namespace tpbessel {

// Circle t(theta) = center + radius e^{i theta}, nodes theta_k = 2 pi k / N.
struct ContourSpec {
  cdouble center{2.0, 0.0};
  double radius = 1.8;
  int nodes = 500;
  int m = 7;  // n = 2m terms

  static ContourSpec default_spec() { return {}; }
  static ContourSpec compact() { return {{1.0, 0.0}, 0.5, 150, 7}; }

  int n_terms() const { return 2 * m; }
  // Throws spec_error when an invariant fails.
  void validate() const;
};

template <class R> struct ContourNodeT {
  using C = complex_t<R>;
  R theta = 0;
  C t;                  // node
  C w;                  // t - center
  MapPointT<R> map;     // sheet +1, continuous along the loop for theta in [0, 2pi)
  std::vector<C> ehat;  // E^_s(t), index s = 1..2m (0 unused)
  std::vector<C> xi_inv;  // xi(t)^{-s}, index s = 1..2m (0 unused)
};

// nu-independent per-node data; immutable after build.
template <class R> class ContourTableT {
 public:
  using C = complex_t<R>;
  static ContourTableT build(const ContourSpec& spec);

  const ContourSpec& spec() const { return spec_; }
  const std::vector<ContourNodeT<R>>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // True when |z - center| <= radius - margin.
  bool contains(const C& z, double margin) const;

 private:
  ContourSpec spec_;
  std::vector<ContourNodeT<R>> nodes_;
};

using ContourTable = ContourTableT<double>;

// sinh(x)/x
template <class R> complex_t<R> sinhc(const complex_t<R>& x);
inline cdouble sinhc(cdouble x) { return sinhc<double>(x); }

// Stabilized integrands A(nu, t), B(nu, t) at a node from its stored data.
template <class R> struct NodeAB {
  complex_t<R> A, B;
};
template <class R>
NodeAB<R> node_integrands(const MapPointT<R>& p, const complex_t<R>* ehat, const complex_t<R>* xi_inv,
                          const R& nu, int m);

// Integrands at the theta = 0 node against t(2 pi) evaluated afresh on the
// branch reached after one turn. Returns the larger relative difference of
// the A and B factors.
double loop_closure_defect(const ContourTable& table, double nu);

// nu-dependent node values used by the trapezoid sums.
template <class R> struct NuNodesT {
  R nu = 0;
  std::vector<complex_t<R>> A, B, zzB, zA;  // A, B, zeta zeta' B, zeta' A
};
template <class R> NuNodesT<R> assemble_nodes(const ContourTableT<R>& table, const R& nu);

// Structure-of-arrays copy for the double kernels.
struct NuNodesSoA {
  double nu = 0;
  std::vector<double> tre, tim, wre, wim;
  std::vector<double> fre[4], fim[4];
  KernelInput input() const;
};
NuNodesSoA to_soa(const ContourTable& table, const NuNodesT<double>& nodes);

template <class R> struct TPCoeffsT {
  complex_t<R> A, B, C, D;
};
using TPCoeffs = TPCoeffsT<double>;

struct CauchyOptions {
  double margin_fraction = 0.05;  // rejection margin, in units of the radius
  double nu_min = 5.0;
  bool normalized = true;         // divide by the discrete kernel sum
  KernelKind kernel = KernelKind::automatic;
};

// Trapezoid values of A, B, C, D at z (guards: nu >= nu_min, z inside the
// contour minus the margin).
TPCoeffs tp_coeffs(const ContourTable& table, const NuNodesSoA& nodes, cdouble z,
                   const CauchyOptions& opt = {});
template <class R>
TPCoeffsT<R> tp_coeffs_generic(const ContourTableT<R>& table, const NuNodesT<R>& nodes,
                               const complex_t<R>& z, bool normalized = true);

cdouble coeff_A(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt = {});
cdouble coeff_B(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt = {});
cdouble coeff_C(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt = {});
cdouble coeff_D(const ContourTable& table, double nu, cdouble z, const CauchyOptions& opt = {});

struct EvalResult {
  cdouble J, Jp, Y, Yp, H1, H1p, H2, H2p;  // derivatives with respect to w = nu z
  TPCoeffs coeffs;
  std::string method = "airy-type";
  int m = 0;
  int N = 0;
  double est_discretization = 0;  // max((R/|z_c|)^N, (|z - z_c|/R)^N)
  bool airy_overflow = false;
};

EvalResult eval_airy_type(const ContourTable& table, double nu, cdouble z,
                          const CauchyOptions& opt = {});
EvalResult eval_airy_type(const ContourTable& table, const NuNodesSoA& nodes, cdouble z,
                          const CauchyOptions& opt = {});

// J, H1, H2 from the trapezoid coefficients in the precision of R, with
// Airy factors from the Maclaurin series. Needs |nu^{2/3} zeta| <= 4 so the
// series keeps the working precision; no margin or nu guards.
template <class R> struct AiryTypeValuesT {
  complex_t<R> J, H1, H2;
  TPCoeffsT<R> coeffs;
};
template <class R>
AiryTypeValuesT<R> eval_airy_type_generic(const ContourTableT<R>& table, const NuNodesT<R>& nodes,
                                          const complex_t<R>& z, bool normalized = true);

// Exact Hankel-Airy representations of A and B with cylinder functions from
// the exponential forms. automatic uses the Hankel pair for Re t > 1 and
// the eye form otherwise; the lower half plane is served by reflection.
enum class DirectForm { automatic, hankel, eye };
struct DirectAB {
  cdouble A, B;
  DirectForm used = DirectForm::automatic;
};
DirectAB direct_AB(double nu, cdouble t, DirectForm form = DirectForm::automatic, int n = 14,
                   const LGGuards& guards = {});

// One node per line: theta, t, zeta, xi, sheet, E^_s for s = 1..2m.
std::string export_table(const ContourTable& table);

// Default and compact tables with a per-nu cache of node values; picks the
// default table when z is inside it and the compact one otherwise.
class AiryTypeEvaluator {
 public:
  explicit AiryTypeEvaluator(CauchyOptions opt = {}, ContourSpec primary = ContourSpec::default_spec(),
                             ContourSpec secondary = ContourSpec::compact());

  EvalResult eval(double nu, cdouble z) const;
  const ContourTable& table_for(cdouble z) const;
  const CauchyOptions& options() const { return opt_; }
  const ContourTable& primary() const { return primary_; }

 private:
  std::shared_ptr<const NuNodesSoA> nodes_for(const ContourTable& t, int which, double nu) const;
  CauchyOptions opt_;
  ContourTable primary_, secondary_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, double>, std::shared_ptr<const NuNodesSoA>> cache_;
};

}  // namespace tpbessel
