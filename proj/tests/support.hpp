#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the library's integrator and phase machinery.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "sturmlab/coeff.hpp"
#include "sturmlab/linsys.hpp"

namespace sturmlab::fx {

inline constexpr double pi = std::numbers::pi;

inline SystemCoefficients constant_system(Interval d, double f, double g) {
  return {CoefficientFn::constant(d, f), CoefficientFn::constant(d, g)};
}

/// f = 0 on [0, pi], sin^2 on [pi, 2pi]; g = sign * 1 where sign = -1 is the
/// psi' = +g phi form of the example (internally g -> -g).
inline CoefficientFn ex11_f() {
  return CoefficientFn({{0.0, pi, ConstantPiece{0.0}}, {pi, 2 * pi, SinPowPiece{1.0, 1.0, 0.0, 2}}});
}
inline SystemCoefficients ex11_system(double g_sign) {
  return {ex11_f(), CoefficientFn::constant(Interval(0.0, 2 * pi), g_sign)};
}

/// f = sin on [0, pi], 0 on [pi, 2pi], -2 sin on [2pi, 3pi]; g = 0.
inline SystemCoefficients plateau_system() {
  CoefficientFn f({{0.0, pi, SinPowPiece{1.0, 1.0, 0.0, 1}},
                   {pi, 2 * pi, ConstantPiece{0.0}},
                   {2 * pi, 3 * pi, SinPowPiece{-2.0, 1.0, 0.0, 1}}});
  return {f, CoefficientFn::constant(Interval(0.0, 3 * pi), 0.0)};
}

/// Classical fixed-step RK4 on (phi, psi); each step is split at knots of the
/// coefficients so the piecewise smoothness is respected.
inline State rk4(const SystemCoefficients& sys, State s, double t0, double t1, std::size_t steps_per_unit = 4000) {
  if (t1 == t0) return s;
  std::vector<double> cuts{t0};
  for (double k : sys.knots())
    if ((k - t0) * (k - t1) < 0) cuts.push_back(k);
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end(), [&](double a, double b) { return t1 > t0 ? a < b : a > b; });
  auto rhs = [&](double t, double ref, const State& u) {
    return State{sys.f.eval_near(t, ref) * u.psi, -sys.g.eval_near(t, ref) * u.phi};
  };
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    const double mid = 0.5 * (a + b);
    const auto n = std::max<std::size_t>(8, static_cast<std::size_t>(std::abs(b - a) * steps_per_unit));
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = a + h * static_cast<double>(i);
      const State k1 = rhs(t, mid, s);
      const State k2 = rhs(t + h / 2, mid, {s.phi + h / 2 * k1.phi, s.psi + h / 2 * k1.psi});
      const State k3 = rhs(t + h / 2, mid, {s.phi + h / 2 * k2.phi, s.psi + h / 2 * k2.psi});
      const State k4 = rhs(t + h, mid, {s.phi + h * k3.phi, s.psi + h * k3.psi});
      s.phi += h / 6 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
      s.psi += h / 6 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi);
    }
  }
  return s;
}

/// Zero components of phi found by a uniform sign scan with `n` points.
/// Exact zeros (|phi| <= zero_tol) form runs; sign changes are refined by
/// bisection. Components closer than `merge` are fused.
inline std::vector<Span> sign_scan_zeros(const std::function<double(double)>& phi, const Interval& I,
                                         std::size_t n = 10000, double zero_tol = 1e-13, double merge = 1e-6) {
  std::vector<Span> raw;
  std::vector<double> ts(n + 1), vs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    ts[i] = i == n ? I.hi : I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n);
    vs[i] = phi(ts[i]);
  }
  auto is_zero = [&](double v) { return std::abs(v) <= zero_tol; };
  for (std::size_t i = 0; i <= n; ++i) {
    if (is_zero(vs[i])) {
      std::size_t j = i;
      while (j + 1 <= n && is_zero(vs[j + 1])) ++j;
      raw.push_back({ts[i], ts[j]});
      i = j;
      continue;
    }
    if (i < n && !is_zero(vs[i + 1]) && (vs[i] > 0) != (vs[i + 1] > 0)) {
      double a = ts[i], b = ts[i + 1], fa = vs[i];
      for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
        const double m = 0.5 * (a + b), fm = phi(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm > 0) == (fa > 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double r = 0.5 * (a + b);
      raw.push_back({r, r});
    }
  }
  std::vector<Span> out;
  for (const auto& s : raw) {
    if (!out.empty() && s.lo - out.back().hi <= merge) {
      out.back().hi = std::max(out.back().hi, s.hi);
      continue;
    }
    out.push_back(s);
  }
  return out;
}

inline double hausdorff(const Span& a, const Span& b) { return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi)); }

inline std::vector<double> uniform_grid(const Interval& I, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = i + 1 == n ? I.hi : I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

}  // namespace sturmlab::fx
