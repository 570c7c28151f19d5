#pragma once

#include "tpbessel/numeric.hpp"

namespace tpbessel {

enum class Region { inside_eye, outside_eye_re_gt_1, outside_eye_other };

const char* region_name(Region r);

// Liouville map data at one point. Values are stored on a definite sheet:
// sheet = +1 is the Schwarz-symmetric convention (principal branches in the
// closed upper half plane, limit from above on (1,inf), conjugates below);
// sheet = -1 is the continuation across (1,inf), which negates delta, xi,
// zeta^{1/2} and x_factor. zeta, zeta_prime and y_factor are single valued.
template <class R> struct MapPointT {
  using C = complex_t<R>;
  C z;
  C zeta;
  C xi;
  C zeta_prime;
  C delta;       // (1-z^2)^{1/2}
  C zeta_half;   // zeta^{1/2}, equal to (3/2) xi / zeta
  C y_factor;    // (zeta/(1-z^2))^{1/4}
  C x_factor;    // zeta^{1/4} (1-z^2)^{1/4} = delta * y_factor
  int sheet = 1;
  R xi_arg = 0;  // continuous argument of xi, equal to (3/2) arg zeta
  Region region = Region::inside_eye;
};

using MapPoint = MapPointT<double>;

// |delta| below which zeta, xi, zeta' come from the delta series.
inline constexpr double kDeltaSeriesThreshold = 0.2;

template <class R> MapPointT<R> map_point(const complex_t<R>& z, int sheet = 1);

// Same point with the sheet flipped (continuation across (1,inf)).
template <class R> MapPointT<R> flip_sheet(const MapPointT<R>& p);

template <class R> complex_t<R> map_zeta(const complex_t<R>& z);
template <class R> complex_t<R> map_zeta_prime(const complex_t<R>& z);

// xi with the argument convention arg xi = (3/2) arg zeta, arg zeta in
// [-2pi, 0]: principal in the upper half plane, continued through (1,inf)
// into the lower half plane. Requires |arg z| <= pi/2.
template <class R> MapPointT<R> map_xi(const complex_t<R>& z);

template <class R> Region classify_region(const complex_t<R>& z);

inline MapPoint map_point(cdouble z, int sheet = 1) { return map_point<double>(z, sheet); }
inline cdouble map_zeta(cdouble z) { return map_zeta<double>(z); }
inline cdouble map_zeta_prime(cdouble z) { return map_zeta_prime<double>(z); }
inline MapPoint map_xi(cdouble z) { return map_xi<double>(z); }
inline Region classify_region(cdouble z) { return classify_region<double>(z); }

namespace detail {
// line 1 = logarithmic form, line 2 = form used for Re z > 1.
// Both take the same accurately computed xi and differ only in branch choice.
template <class R> complex_t<R> zeta_from_xi(const complex_t<R>& xi, int line);
}  // namespace detail

}  // namespace tpbessel
