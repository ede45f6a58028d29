#pragma once

// Seeded random problem generators for property suites and the randomized CLI
// analysis. Everything is driven by an explicit seed; a given seed always
// yields the same instance.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sturmlab/coeff.hpp"
#include "sturmlab/linsys.hpp"

namespace sturmlab::instances {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Knots 0 = k_0 < ... < k_n = length with jittered spacing.
inline std::vector<double> random_knots(Rng& rng, double length, int n) {
  std::vector<double> k{0.0};
  for (int i = 1; i < n; ++i) k.push_back(length * (static_cast<double>(i) + uniform(rng, -0.3, 0.3)) / n);
  k.push_back(length);
  return k;
}

inline std::vector<double> random_values(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

/// Sets a random run of consecutive knot values to zero so the interpolant
/// vanishes identically between them.
inline void add_zero_plateau(Rng& rng, std::vector<double>& values) {
  if (values.size() < 4) return;
  const std::size_t i = std::uniform_int_distribution<std::size_t>(1, values.size() - 3)(rng);
  values[i] = values[i + 1] = 0.0;
}

inline State random_unit_state(Rng& rng) {
  const double a = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return {std::sin(a), std::cos(a)};
}

inline State state_with_ratio(double r) {
  const double n = std::hypot(1.0, r);
  return {1.0 / n, r / n};
}

struct SystemInstance {
  SystemCoefficients sys;
  State init;
};

/// |f|, |g| <= 2 on [0, 10]; f may change sign and may vanish on a plateau.
inline SystemInstance random_system(std::uint64_t seed) {
  Rng rng(seed);
  const int n = std::uniform_int_distribution<int>(4, 9)(rng);
  const auto kf = random_knots(rng, 10.0, n), kg = random_knots(rng, 10.0, n);
  auto vf = random_values(rng, kf.size(), coin(rng, 0.5) ? -2.0 : 0.0, 2.0);
  if (coin(rng, 0.3)) add_zero_plateau(rng, vf);
  const auto vg = random_values(rng, kg.size(), -2.0, 2.0);
  return {SystemCoefficients(CoefficientFn::piecewise_linear(kf, vf), CoefficientFn::piecewise_linear(kg, vg)),
          random_unit_state(rng)};
}

/// A pair (sys1, sol1) majorizing (sys2, sol2) by construction: f1 = f2 + d and
/// g1 = g2 + c with d, c >= 0 (each possibly identically zero), f2 >= 0 with
/// an optional zero plateau, and initial ratios ordered as condition 1 needs.
struct ConformingPair {
  SystemCoefficients sys1;
  SystemCoefficients sys2;
  State init1;
  State init2;
  double t_end;
};

inline ConformingPair conforming_pair(std::uint64_t seed) {
  Rng rng(seed);
  const double L = uniform(rng, 6.0, 12.0);
  const int n = std::uniform_int_distribution<int>(4, 8)(rng);
  const auto k = random_knots(rng, L, n);
  auto f2 = random_values(rng, k.size(), 0.2, 2.0);
  if (coin(rng, 0.3)) add_zero_plateau(rng, f2);
  const bool d_zero = coin(rng, 0.3), c_zero = coin(rng, 0.3);
  const auto d = d_zero ? std::vector<double>(k.size(), 0.0) : random_values(rng, k.size(), 0.05, 1.0);
  const auto g2 = random_values(rng, k.size(), -1.0, 4.0);
  const auto c = c_zero ? std::vector<double>(k.size(), 0.0) : random_values(rng, k.size(), 0.05, 2.0);
  std::vector<double> f1(k.size()), g1(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    f1[i] = f2[i] + d[i];
    g1[i] = g2[i] + c[i];
  }
  State init2 = coin(rng, 0.25) ? State{0.0, 1.0} : random_unit_state(rng);
  State init1;
  if (std::abs(init2.phi) < 1e-3) {
    init2 = {0.0, 1.0};
    init1 = coin(rng, 0.3) ? State{0.0, 1.0} : random_unit_state(rng);
  } else {
    const double r2 = init2.psi / init2.phi;
    init1 = state_with_ratio(r2 - (coin(rng, 0.3) ? 0.0 : uniform(rng, 0.0, 3.0)));
  }
  return {SystemCoefficients(CoefficientFn::piecewise_linear(k, f1), CoefficientFn::piecewise_linear(k, g1)),
          SystemCoefficients(CoefficientFn::piecewise_linear(k, f2), CoefficientFn::piecewise_linear(k, g2)), init1,
          init2, L};
}

/// (p2, q2) majorizing (p1, q1): p1 = p2 + d >= p2 > 0, q2 = q1 + c, and
/// initial states (phi, p phi') with psi1/phi1 >= psi2/phi2.
struct SturmPair {
  CoefficientFn p1, q1, p2, q2;
  State init1;
  State init2;
  Interval domain;
};

inline SturmPair sturm_pair(std::uint64_t seed) {
  Rng rng(seed);
  const double L = uniform(rng, 5.0, 10.0);
  const int n = std::uniform_int_distribution<int>(3, 7)(rng);
  const auto k = random_knots(rng, L, n);
  const auto p2 = random_values(rng, k.size(), 0.5, 2.0);
  const bool d_zero = coin(rng, 0.3), c_zero = coin(rng, 0.3);
  const auto d = d_zero ? std::vector<double>(k.size(), 0.0) : random_values(rng, k.size(), 0.05, 1.0);
  const auto q1 = random_values(rng, k.size(), -0.5, 4.0);
  const auto c = c_zero ? std::vector<double>(k.size(), 0.0) : random_values(rng, k.size(), 0.05, 3.0);
  std::vector<double> p1(k.size()), q2(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    p1[i] = p2[i] + d[i];
    q2[i] = q1[i] + c[i];
  }
  State init1 = coin(rng, 0.25) ? State{0.0, 1.0} : random_unit_state(rng);
  State init2;
  if (std::abs(init1.phi) < 1e-3) {
    init1 = {0.0, 1.0};
    init2 = coin(rng, 0.3) ? State{0.0, 1.0} : random_unit_state(rng);
  } else {
    init2 = state_with_ratio(init1.psi / init1.phi - (coin(rng, 0.3) ? 0.0 : uniform(rng, 0.0, 3.0)));
  }
  return {CoefficientFn::piecewise_linear(k, p1), CoefficientFn::piecewise_linear(k, q1),
          CoefficientFn::piecewise_linear(k, p2), CoefficientFn::piecewise_linear(k, q2), init1, init2,
          Interval(0.0, L)};
}

/// f >= 0 (optionally with a zero plateau) and arbitrary g on [0, 10].
inline SystemCoefficients random_nonneg_f_system(Rng& rng, bool allow_plateau = true, double f_lo = 0.0) {
  const int n = std::uniform_int_distribution<int>(4, 8)(rng);
  const auto k = random_knots(rng, 10.0, n);
  auto f = random_values(rng, k.size(), f_lo, 2.0);
  if (allow_plateau && coin(rng, 0.3)) add_zero_plateau(rng, f);
  const auto g = random_values(rng, k.size(), -2.0, 2.0);
  return {CoefficientFn::piecewise_linear(k, f), CoefficientFn::piecewise_linear(k, g)};
}

}  // namespace sturmlab::instances
