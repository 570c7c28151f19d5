#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tpbessel/complex_map.hpp"
#include "tpbessel/numeric.hpp"
#include "tpbessel/rational.hpp"

namespace tpbessel {

inline constexpr int kDefaultSMax = 20;

// Finite sum of c * x^i * delta^{-j}, x = z^2, delta = (1 - z^2)^{1/2}.
// The representation is not reduced; use canonical() to compare.
struct DeltaRational {
  std::map<std::pair<int, int>, Rational> terms;

  DeltaRational& operator+=(const DeltaRational& o);
  DeltaRational operator*(const DeltaRational& o) const;
  DeltaRational scaled(const Rational& c) const;
  // (z / (2 delta)) d/dz
  DeltaRational half_z_over_delta_derivative() const;

  // Numerator polynomial N and power J with value N(x) / delta^J.
  struct Canonical {
    RPoly num;
    int delta_power = 0;
  };
  Canonical canonical() const;
};

// F^_s, s = 1..s_max (index 0 unused), from the printed F^_1 and the
// differentiation/convolution recursion.
std::vector<DeltaRational> build_fhat(int s_max);

// Q_s(t), s = 1..s_max (index 0 empty).
std::vector<RPoly> build_q(int s_max);

// P_s(x), s = 1..s_max (index 0 empty), from Q by termwise antidifferentiation.
std::vector<RPoly> build_p(const std::vector<RPoly>& q);

// True when z^2 Q_s(z^2) / delta^{3(s+1)} equals f identically.
bool fhat_matches_q(const DeltaRational& f, const RPoly& q, int s);

struct PolyTable {
  std::vector<RPoly> Q;  // index 1..s_max
  std::vector<RPoly> P;  // index 1..s_max
  int s_max = 0;
};

PolyTable build_poly_table(int s_max = kDefaultSMax);
const PolyTable& default_poly_table();

// Text dump: one polynomial per line, "Q s D : n_0 n_1 ..." with common
// denominator D and integer numerators in ascending powers.
std::string dump_poly_table(const PolyTable& t);

// C_{2j+1} = B_{2j+2} / ((2j+1)(2j+2)), j = 0..j_max.
std::vector<Rational> stirling_constants(int j_max);

// Bernoulli numbers B_0..B_n (B_1 = -1/2).
std::vector<Rational> bernoulli_numbers(int n);

template <class R> class CoeffEvaluatorT {
 public:
  using C = complex_t<R>;
  explicit CoeffEvaluatorT(const PolyTable& table);

  int s_max() const { return s_max_; }

  // E^_s(z) = P_s(z^2) / delta^{3s}, delta from the tracked map point.
  C ehat(int s, const MapPointT<R>& p) const;
  // F^_s(z) = z^2 Q_s(z^2) / delta^{3(s+1)}
  C fhat(int s, const MapPointT<R>& p) const;
  // dE^_s/dz = -(delta / z) F^_s(z)
  C ehat_prime(int s, const MapPointT<R>& p) const;
  // out[s-1] = E^_s for s = 1..n
  void ehat_all(const MapPointT<R>& p, int n, C* out) const;

  // Same quantities from an explicit delta (any continuation) and z.
  C ehat_delta(int s, const C& z, const C& delta) const;
  C fhat_delta(int s, const C& z, const C& delta) const;

 private:
  void check_singular(const C& z) const;
  int s_max_;
  std::vector<std::vector<R>> pu_;  // P_s in powers of u = 1 - x
  std::vector<std::vector<R>> qx_;  // Q_s in powers of x
};

using CoeffEvaluator = CoeffEvaluatorT<double>;

template <class R> const CoeffEvaluatorT<R>& default_evaluator();

// alpha_{2j+1} = (E(xi*) + E(xi)) / 2, with E continued numerically around a
// loop about z = 1 through the real point where zeta = zeta0. The offset is
// added to E_{2j+1}.
cdouble check_alpha(int j, double zeta0, double offset = 0.0);

}  // namespace tpbessel
