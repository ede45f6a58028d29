#pragma once

// Dormand-Prince 5(4) with the standard fourth-order continuous extension.
//
// Steps never cross a caller-supplied breakpoint, so piecewise coefficients are
// integrated piece by piece. Every accepted step keeps its dense-output
// coefficients; the resulting DenseSolution can be evaluated anywhere in its
// span and exposes each step interpolant as a quartic in the local step
// parameter for exact root and range queries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

#include "sturmlab/errors.hpp"
#include "sturmlab/poly.hpp"

namespace sturmlab::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 0.0;  // 0 selects automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
  std::vector<double> breakpoints;  // step boundaries are forced onto these
};

/// One accepted step. The interpolant is
///   y(t0 + s h) = y0 + s (d + (1-s)(b + s (c + (1-s) e))),  s in [0, 1],
/// with h possibly negative for backward integration.
template <std::size_t N>
struct DenseStep {
  double t0;
  double tend;
  double h;  // tend - t0
  Vec<N> y0;
  Vec<N> y1;
  Vec<N> d;  // y1 - y0
  Vec<N> b;
  Vec<N> c;
  Vec<N> e;

  double t1() const { return tend; }
  double lo() const { return h > 0 ? t0 : tend; }
  double hi() const { return h > 0 ? tend : t0; }

  double param(double t) const { return (t - t0) / h; }
  double time_at(double s) const { return s == 1.0 ? t1() : t0 + s * h; }

  double eval(std::size_t i, double s) const {
    return y0[i] + s * (d[i] + (1.0 - s) * (b[i] + s * (c[i] + (1.0 - s) * e[i])));
  }

  /// Interpolant value; exact stored endpoints at s = 0 and s = 1.
  double value(std::size_t i, double s) const {
    if (s == 0.0) return y0[i];
    if (s == 1.0) return y1[i];
    return eval(i, s);
  }

  /// Parameters s in [pa, pb] where component i equals `level`. When the caller
  /// knows the component is monotone on the step, only the endpoint signs are
  /// trusted and at most one crossing is reported; this suppresses spurious
  /// interpolant roots where the true solution merely touches the level.
  std::vector<double> crossings(std::size_t i, double level, double pa, double pb, bool monotone) const {
    if (!monotone) {
      auto m = monomial(i);
      m[0] -= level;
      return poly::roots_in(m, pa, pb);
    }
    const double va = value(i, pa) - level, vb = value(i, pb) - level;
    if (va == 0.0 && vb == 0.0) return pa == pb ? std::vector<double>{pa} : std::vector<double>{pa, pb};
    if (va == 0.0) return {pa};
    if (vb == 0.0) return {pb};
    if ((va < 0.0) == (vb < 0.0)) return {};
    double a = pa, b = pb;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double vm = eval(i, m) - level;
      if (vm == 0.0) return {m};
      if ((vm < 0.0) == (va < 0.0))
        a = m;
      else
        b = m;
    }
    return {0.5 * (a + b)};
  }

  /// Monomial coefficients in s of component i.
  std::array<double, 5> monomial(std::size_t i) const {
    return {y0[i], d[i] + b[i], c[i] + e[i] - b[i], -2.0 * e[i] - c[i], e[i]};
  }
};

template <std::size_t N>
class DenseSolution {
 public:
  DenseSolution() = default;
  explicit DenseSolution(std::vector<DenseStep<N>> steps) : steps_(std::move(steps)) {
    std::sort(steps_.begin(), steps_.end(), [](const auto& a, const auto& b) { return a.lo() < b.lo(); });
  }

  bool empty() const { return steps_.empty(); }
  double lo() const { return steps_.front().lo(); }
  double hi() const { return steps_.back().hi(); }
  const std::vector<DenseStep<N>>& steps() const { return steps_; }

  std::size_t step_index(double t) const {
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double v, const DenseStep<N>& s) { return v < s.lo(); });
    std::size_t i = static_cast<std::size_t>(std::distance(steps_.begin(), it));
    return i == 0 ? 0 : std::min(i - 1, steps_.size() - 1);
  }

  /// Mesh points reproduce the stored step endpoints exactly.
  Vec<N> eval(double t) const {
    if (!(t >= lo() && t <= hi())) throw DomainError("dense output evaluated outside its span");
    const auto& s = steps_[step_index(t)];
    if (t == s.t0) return s.y0;
    if (t == s.t1()) return s.y1;
    const double p = s.param(t);
    Vec<N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = s.eval(i, p);
    return y;
  }

  double eval(std::size_t i, double t) const { return eval(t)[i]; }

  std::vector<double> mesh() const {
    std::vector<double> m;
    for (const auto& s : steps_) m.push_back(s.lo());
    if (!steps_.empty()) m.push_back(hi());
    return m;
  }

  /// Roots of component i minus `level` in [a, b], ascending, with duplicates
  /// at shared step ends collapsed.
  std::vector<double> roots(std::size_t i, double level, double a, double b) const {
    std::vector<double> out;
    for (const auto& s : steps_) {
      if (s.hi() < a || s.lo() > b) continue;
      auto m = s.monomial(i);
      m[0] -= level;
      double pa = s.param(std::max(a, s.lo())), pb = s.param(std::min(b, s.hi()));
      if (pa > pb) std::swap(pa, pb);
      pa = std::clamp(pa, 0.0, 1.0);
      pb = std::clamp(pb, 0.0, 1.0);
      for (double r : poly::roots_in(m, pa, pb)) out.push_back(s.time_at(r));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Exact extrema of component i over [a, b] from the step interpolants.
  poly::Extrema extrema(std::size_t i, double a, double b) const {
    const double inf = std::numeric_limits<double>::infinity();
    poly::Extrema out{inf, a, -inf, a};
    for (const auto& s : steps_) {
      if (s.hi() < a || s.lo() > b) continue;
      const auto m = s.monomial(i);
      double pa = s.param(std::max(a, s.lo())), pb = s.param(std::min(b, s.hi()));
      if (pa > pb) std::swap(pa, pb);
      pa = std::clamp(pa, 0.0, 1.0);
      pb = std::clamp(pb, 0.0, 1.0);
      const auto e = poly::extrema(m, pa, pb);
      if (e.min < out.min) out = {e.min, s.time_at(e.argmin), out.max, out.argmax};
      if (e.max > out.max) out = {out.min, out.argmin, e.max, s.time_at(e.argmax)};
    }
    return out;
  }

  /// Concatenates a backward solution (ending at the junction) with a forward one.
  static DenseSolution join(const DenseSolution& a, const DenseSolution& b) {
    std::vector<DenseStep<N>> all = a.steps_;
    all.insert(all.end(), b.steps_.begin(), b.steps_.end());
    return DenseSolution(std::move(all));
  }

 private:
  std::vector<DenseStep<N>> steps_;
};

namespace detail {

struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from (t_start, y_start) to t_end (either direction).
/// `rhs` is either Vec<N>(double t, const Vec<N>&) or
/// Vec<N>(double t, const Vec<N>&, double ref), where `ref` lies strictly inside
/// the current step; piecewise right-hand sides use it to pick the piece, so a
/// stage evaluated exactly on a breakpoint sees the coefficients of its own step.
template <std::size_t N, class Rhs>
DenseSolution<N> integrate(Rhs&& rhs_in, double t_start, const Vec<N>& y_start, double t_end, const Options& opt) {
  using T = detail::Dopri5;
  auto rhs = [&rhs_in](double t, const Vec<N>& y, double ref) -> Vec<N> {
    if constexpr (std::is_invocable_v<Rhs&, double, const Vec<N>&, double>)
      return rhs_in(t, y, ref);
    else
      return rhs_in(t, y);
  };
  std::vector<DenseStep<N>> steps;
  if (t_start == t_end) return DenseSolution<N>(std::move(steps));
  const double dir = t_end > t_start ? 1.0 : -1.0;

  std::vector<double> stops;
  for (double b : opt.breakpoints)
    if ((b - t_start) * dir > 0 && (t_end - b) * dir > 0) stops.push_back(b);
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  auto scale = [&](double a, double b) { return opt.atol + opt.rtol * std::max(std::abs(a), std::abs(b)); };

  double t = t_start;
  Vec<N> y = y_start;
  auto first_ref = [&](double from) {
    const double to = stops.front();
    return from + 0.5 * (to - from);
  };
  Vec<N> k1 = rhs(t, y, first_ref(t));

  double h = opt.h_init;
  if (h <= 0.0) {
    // Hairer-Wanner starting step heuristic.
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = scale(y[i], y[i]);
      d0 += (y[i] / sk) * (y[i] / sk);
      d1 += (k1[i] / sk) * (k1[i] / sk);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t_end - t_start));
    Vec<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k1[i];
    const Vec<N> f1 = rhs(t + dir * h0, y1, t + 0.5 * dir * h0);
    double d2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = scale(y[i], y[i]);
      d2 += ((f1[i] - k1[i]) / sk) * ((f1[i] - k1[i]) / sk);
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100 * h0, h1);
  }
  h = std::min(h, opt.h_max);

  std::size_t stop_i = 0;
  bool reject_last = false;
  while (stop_i < stops.size()) {
    if (steps.size() >= opt.max_steps) throw IntegrationFailure("step budget exhausted", t);
    const double target = stops[stop_i];
    const double remaining = (target - t) * dir;
    bool lands = false;
    const double h_prop = h;
    double hh = h;
    if (hh >= remaining * (1.0 - 1e-12)) {
      hh = remaining;
      lands = true;
    }
    if (hh < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationFailure("step size underflow", t);
    const double hs = dir * hh;

    const double ref = t + 0.5 * hs;
    Vec<N> tmp, k2, k3, k4, k5, k6;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * T::a21 * k1[i];
    k2 = rhs(t + T::c2 * hs, tmp, ref);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (T::a31 * k1[i] + T::a32 * k2[i]);
    k3 = rhs(t + T::c3 * hs, tmp, ref);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    k4 = rhs(t + T::c4 * hs, tmp, ref);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
    k5 = rhs(t + T::c5 * hs, tmp, ref);
    const double t_new = lands ? target : t + hs;
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] + T::a65 * k5[i]);
    k6 = rhs(t_new, tmp, ref);
    Vec<N> y_new;
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + hs * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] + T::a75 * k5[i] + T::a76 * k6[i]);
    const Vec<N> k7 = rhs(t_new, y_new, ref);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          hs * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
      const double r = ei / scale(y[i], y_new[i]);
      err += r * r;
      finite = finite && std::isfinite(y_new[i]);
    }
    err = finite ? std::sqrt(err / N) : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      DenseStep<N> s;
      s.t0 = t;
      s.tend = t_new;
      s.h = t_new - t;
      s.y0 = y;
      s.y1 = y_new;
      for (std::size_t i = 0; i < N; ++i) {
        s.d[i] = y_new[i] - y[i];
        s.b[i] = hs * k1[i] - s.d[i];
        s.c[i] = s.d[i] - hs * k7[i] - s.b[i];
        s.e[i] = hs * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] + T::d5 * k5[i] + T::d6 * k6[i] +
                       T::d7 * k7[i]);
      }
      steps.push_back(s);
      t = t_new;
      y = y_new;
      k1 = k7;
      if (lands) {
        ++stop_i;
        // The next step lives in a new piece; its first stage must see that piece.
        if (stop_i < stops.size()) k1 = rhs(t, y, t + 0.5 * (stops[stop_i] - t));
      }
      double fac = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0);
      if (reject_last) fac = std::min(fac, 1.0);
      h = hh * fac;
      if (lands) h = std::max(h, h_prop);  // a clipped step says nothing about the natural size
      h = std::min(h, opt.h_max);
      reject_last = false;
    } else {
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.1;
      h = hh * fac;
      reject_last = true;
    }
  }
  return DenseSolution<N>(std::move(steps));
}

}  // namespace sturmlab::ode
