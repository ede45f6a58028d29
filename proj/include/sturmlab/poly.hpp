#pragma once

// Dense real polynomials in monomial form, coefficients in ascending order.
// Used for exact sign/range analysis of polynomial coefficient pieces and
// for locating roots of the per-step dense-output interpolants.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace sturmlab::poly {

inline double eval(std::span<const double> c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Strips trailing exact zeros; an all-zero polynomial becomes empty.
inline std::vector<double> trimmed(std::span<const double> c) {
  std::size_t n = c.size();
  while (n > 0 && c[n - 1] == 0.0) --n;
  return {c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)};
}

inline bool is_zero(std::span<const double> c) {
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

inline std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

/// Antiderivative vanishing at x = 0.
inline std::vector<double> antiderivative(std::span<const double> c) {
  std::vector<double> a(c.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
  return a;
}

namespace detail {

// Bisection to adjacent doubles; requires sign(p(a)) != sign(p(b)), both nonzero.
inline double bisect(std::span<const double> c, double a, double b) {
  double fa = eval(c, a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = eval(c, m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// All real roots in [lo, hi], ascending. Roots of even multiplicity are
/// found only when the polynomial vanishes exactly at the critical point.
/// An identically-zero polynomial yields no roots; callers test is_zero().
inline std::vector<double> roots_in(std::span<const double> coeffs, double lo, double hi) {
  const std::vector<double> c = trimmed(coeffs);
  std::vector<double> out;
  if (c.size() <= 1 || !(lo <= hi)) return out;
  if (c.size() == 2) {
    const double r = -c[0] / c[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return out;
  }
  std::vector<double> knots{lo};
  for (double r : roots_in(derivative(c), lo, hi))
    if (r > knots.back()) knots.push_back(r);
  if (hi > knots.back()) knots.push_back(hi);

  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    const double fa = eval(c, a), fb = eval(c, b);
    if (fa == 0.0) {
      out.push_back(a);
    } else if (fb != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      out.push_back(detail::bisect(c, a, b));
    }
  }
  if (knots.size() > 1 && eval(c, knots.back()) == 0.0) out.push_back(knots.back());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Extrema {
  double min;
  double argmin;
  double max;
  double argmax;
};

/// Exact (to rounding) extrema over [lo, hi] via endpoints and critical points.
inline Extrema extrema(std::span<const double> c, double lo, double hi) {
  Extrema e{eval(c, lo), lo, eval(c, lo), lo};
  auto visit = [&](double x) {
    const double v = eval(c, x);
    if (v < e.min) e = {v, x, e.max, e.argmax};
    if (v > e.max) e = {e.min, e.argmin, v, x};
  };
  for (double r : roots_in(derivative(c), lo, hi)) visit(r);
  visit(hi);
  return e;
}

}  // namespace sturmlab::poly
