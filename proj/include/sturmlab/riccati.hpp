#pragma once

// Riccati equations y' + f y^2 + g = 0 attached to phi' = f psi, psi' = -g phi.
//
// Real solutions are carried projectively: y = psi/phi on the linear lift with
// phi(t0) = 1, psi(t0) = y0, so blow-up of y is an ordinary zero of phi. The
// complex solution with z(a) = i is integrated as a real system in (Re z, Im z)
// augmented by the running phase integral of f Im z.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sturmlab/coeff.hpp"
#include "sturmlab/linsys.hpp"
#include "sturmlab/ode.hpp"

namespace sturmlab {

inline constexpr double kDefaultPoleTol = 1e-9;
inline constexpr double kDefaultResidualTol = 1e-8;

struct RiccatiSolution {
  SystemCoefficients sys;
  Trajectory lift;
  double t0;
  double y0;

  /// psi/phi of the lift; +-inf exactly at a pole.
  double y(double t) const {
    const State s = lift.eval(t);
    return s.psi / s.phi;
  }
  double operator()(double t) const { return y(t); }
};

inline RiccatiSolution solve_riccati(const SystemCoefficients& sys, double t0, double y0, const Interval& I,
                                     double tol = kDefaultIntegrationTol) {
  if (!std::isfinite(y0)) throw PreconditionError("solve_riccati: y0 must be finite");
  Trajectory lift = integrate_system_from(sys, State{1.0, y0}, t0, I, tol);
  return RiccatiSolution{sys, std::move(lift), t0, y0};
}

/// A pole of y: a zero of the lift's phi. `continuum` marks an interval on
/// which phi vanishes identically (only where f is identically zero).
struct Pole {
  double lo;
  double hi;
  bool continuum = false;
};

inline std::vector<Pole> poles(const RiccatiSolution& sol, const Interval& I, double tol = kDefaultPoleTol) {
  std::vector<Pole> out;
  for (const Span& z : sol.lift.phi_zero_set(I.lo, I.hi)) {
    if (!out.empty() && z.lo - out.back().hi <= tol) {
      out.back().hi = std::max(out.back().hi, z.hi);
      out.back().continuum = out.back().continuum || !z.is_point();
      continue;
    }
    out.push_back({z.lo, z.hi, !z.is_point()});
  }
  return out;
}

/// One-sided behaviour of y next to an isolated pole, probed at distances
/// window, window/10 and window/100.
struct PoleLimits {
  double left_min;   // most negative y seen on the left
  double right_max;  // most positive y seen on the right
  bool left_probed = false;
  bool right_probed = false;
};

inline PoleLimits probe_pole(const RiccatiSolution& sol, const Pole& p, double window = 1e-6) {
  PoleLimits r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  const auto& D = sol.lift.domain();
  for (double d : {window, window / 10, window / 100}) {
    if (p.lo - d >= D.lo) {
      r.left_min = std::min(r.left_min, sol.y(p.lo - d));
      r.left_probed = true;
    }
    if (p.hi + d <= D.hi) {
      r.right_max = std::max(r.right_max, sol.y(p.hi + d));
      r.right_probed = true;
    }
  }
  return r;
}

/// Endpoints of the maximal existence interval around t inside I. An end that
/// is not a pole is the working-domain endpoint and flagged as such.
struct MaxInterval {
  double t1;
  double t2;
  bool left_is_pole = false;
  bool right_is_pole = false;
};

inline MaxInterval max_interval(const RiccatiSolution& sol, double t, const Interval& I,
                                double tol = kDefaultPoleTol) {
  if (!I.contains(t)) throw DomainError("max_interval: t outside interval");
  MaxInterval m{I.lo, I.hi};
  for (const Pole& p : poles(sol, I, tol)) {
    if (t >= p.lo - tol && t <= p.hi + tol) throw PreconditionError("max_interval: t is a pole (within tol)");
    if (p.hi < t) {
      m.t1 = p.hi;
      m.left_is_pole = true;
    } else if (p.lo > t && !m.right_is_pole) {
      m.t2 = p.lo;
      m.right_is_pole = true;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

class ComplexPhaseSolution {
 public:
  ComplexPhaseSolution(SystemCoefficients sys, double a, double tol, ode::DenseSolution<3> dense)
      : sys_(std::move(sys)), a_(a), tol_(tol), dense_(std::move(dense)) {
    const auto e = dense_.extrema(1, dense_.lo(), dense_.hi());
    min_y_ = e.min;
    min_y_at_ = e.argmin;
  }

  const SystemCoefficients& sys() const { return sys_; }
  double a() const { return a_; }
  double tol() const { return tol_; }
  Interval domain() const { return sys_.domain(); }
  const ode::DenseSolution<3>& dense() const { return dense_; }

  double x(double t) const { return at(t)[0]; }
  double y(double t) const { return at(t)[1]; }
  /// Integral of f * Im z from a to t.
  double phase_integral(double t) const { return at(t)[2]; }

  double min_y() const { return min_y_; }
  double min_y_at() const { return min_y_at_; }

 private:
  SystemCoefficients sys_;
  double a_;
  double tol_;
  ode::DenseSolution<3> dense_;
  double min_y_ = 0.0;
  double min_y_at_ = 0.0;

  ode::Vec<3> at(double t) const {
    if (t == a_) return {0.0, 1.0, 0.0};
    return dense_.eval(t);
  }
};

/// z = x + i y with z(a) = i: x' = -f (x^2 - y^2) - g, y' = -2 f x y, plus the
/// phase integral I' = f y.
inline ComplexPhaseSolution solve_complex_phase(const SystemCoefficients& sys, double a,
                                                double tol = kDefaultIntegrationTol) {
  if (a != sys.domain().lo) throw PreconditionError("solve_complex_phase: a must be the domain's lower endpoint");
  auto rhs = [&sys](double t, const ode::Vec<3>& u, double ref) -> ode::Vec<3> {
    const double f = sys.f.eval_near(t, ref), g = sys.g.eval_near(t, ref);
    return {-f * (u[0] * u[0] - u[1] * u[1]) - g, -2.0 * f * u[0] * u[1], f * u[1]};
  };
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.breakpoints = sys.knots();
  auto dense = ode::integrate<3>(rhs, a, ode::Vec<3>{0.0, 1.0, 0.0}, sys.domain().hi, opt);
  ComplexPhaseSolution cps(sys, a, tol, std::move(dense));
  if (!(cps.min_y() > 0.0))
    throw InvariantViolation("Im z reached " + std::to_string(cps.min_y()) + " at t=" + std::to_string(cps.min_y_at()) +
                             "; tighten the integration tolerance");
  return cps;
}

// ---------------------------------------------------------------------------

struct InequalitySolution {
  ScalarFn eta;
  SystemCoefficients sys;
  Interval domain;
  double residual_margin;
  double operator()(double t) const { return eta(t); }
};

/// eta(t) = lambda - integral of g from t1 to t, valid on [t1, t2] when f >= 0
/// there; its residual eta' + f eta^2 + g = f eta^2 is nonnegative.
inline InequalitySolution eta_from_lambda(const SystemCoefficients& sys, double t1, double lambda,
                                          std::optional<double> t2 = std::nullopt) {
  const Interval dom(t1, t2.value_or(sys.domain().hi));
  if (!sys.domain().contains(dom)) throw DomainError("eta_from_lambda: interval outside system domain");
  if (!sys.f.nonnegative_on(dom)) throw PreconditionError("eta_from_lambda: f is not nonnegative on the interval");
  auto G = std::make_shared<RunningIntegral>(sys.g, t1);
  return InequalitySolution{[G, lambda](double t) { return lambda - (*G)(t); }, sys, dom, 0.0};
}

struct InequalityCheck {
  bool holds = true;
  double worst_residual = std::numeric_limits<double>::infinity();
  double worst_at = 0.0;
  std::size_t points = 0;
};

/// 512 points per unit length, at least 64.
inline std::size_t default_residual_grid(const Interval& I) {
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(512.0 * I.length())));
}

/// Finite-difference check of eta' + f eta^2 + g >= -residual_tol on a uniform
/// grid plus the coefficient breakpoints of I. Derivatives are central with
/// step 1e-6 away from breakpoints and second-order one-sided (both sides
/// where available) at or next to them.
inline InequalityCheck check_inequality(const ScalarFn& eta, const SystemCoefficients& sys, const Interval& I,
                                        std::size_t grid, double residual_tol = kDefaultResidualTol) {
  constexpr double h = 1e-6;
  if (!sys.domain().contains(I)) throw DomainError("check_inequality: interval outside system domain");
  std::vector<double> ts;
  const std::size_t n = std::max<std::size_t>(grid, 2);
  for (std::size_t i = 0; i < n; ++i) ts.push_back(I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n - 1));
  ts.back() = I.hi;
  const auto knots = sys.knots();
  for (double k : knots)
    if (k >= I.lo && k <= I.hi) ts.push_back(k);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  auto knot_in = [&](double a, double b) {
    return std::any_of(knots.begin(), knots.end(), [&](double k) { return k > a && k < b; });
  };

  InequalityCheck r;
  r.points = ts.size();
  for (double t : ts) {
    const double e = eta(t);
    // (derivative, point selecting the coefficient piece)
    std::vector<std::pair<double, double>> derivs;
    const bool can_left = t - 2 * h >= I.lo && !knot_in(t - 2 * h, t);
    const bool can_right = t + 2 * h <= I.hi && !knot_in(t, t + 2 * h);
    if (t - h >= I.lo && t + h <= I.hi && !knot_in(t - h, t + h) &&
        std::find(knots.begin(), knots.end(), t) == knots.end()) {
      derivs.push_back({(eta(t + h) - eta(t - h)) / (2 * h), t});
    } else {
      if (can_right) derivs.push_back({(-3 * e + 4 * eta(t + h) - eta(t + 2 * h)) / (2 * h), t + h});
      if (can_left) derivs.push_back({(3 * e - 4 * eta(t - h) + eta(t - 2 * h)) / (2 * h), t - h});
    }
    for (const auto& [d, ref] : derivs) {
      const double res = d + sys.f.eval_near(t, ref) * e * e + sys.g.eval_near(t, ref);
      if (res < r.worst_residual) {
        r.worst_residual = res;
        r.worst_at = t;
      }
    }
  }
  r.holds = r.worst_residual >= -residual_tol;
  return r;
}

// ---------------------------------------------------------------------------

/// L' = weight(t), J' = exp(L) integrand(t) on [from, to] with L = J = 0 at
/// `from`. Min/max of J come from the dense interpolants.
struct WeightedIntegral {
  ode::DenseSolution<2> dense;
  double min_value;
  double min_at;
  double final_value;
};

inline WeightedIntegral weighted_integral(const ScalarFn& weight, const ScalarFn& integrand, double from, double to,
                                          std::vector<double> breakpoints, double tol) {
  auto rhs = [&](double t, const ode::Vec<2>& u) -> ode::Vec<2> {
    return {weight(t), std::exp(u[0]) * integrand(t)};
  };
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.breakpoints = std::move(breakpoints);
  auto dense = ode::integrate<2>(rhs, from, ode::Vec<2>{0.0, 0.0}, to, opt);
  if (dense.empty()) return {std::move(dense), 0.0, from, 0.0};
  const auto e = dense.extrema(1, dense.lo(), dense.hi());
  double final_value = dense.steps().back().y1[1];
  WeightedIntegral w{std::move(dense), std::min(0.0, e.min), e.min < 0.0 ? e.argmin : from, final_value};
  return w;
}

struct HypothesisCheck {
  std::string name;
  bool ok;
  std::string detail;
};

struct Theorem21Report {
  bool holds = false;
  double min_margin = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> witness;  // location of the minimum when it is negative
  std::vector<HypothesisCheck> preconditions;
};

/// Evaluates the comparison hypothesis
///   H(t) = y_init - y2(t0) + int_{t0}^t exp{int_{t0}^tau f1 (eta1 + eta2)} [(f2 - f1) y2^2 + g2 - g1] dtau
/// on I = [t0, tau0]; holds iff min H >= -tol and every precondition passes.
inline Theorem21Report theorem21_hypothesis(const SystemCoefficients& sys1, const SystemCoefficients& sys2,
                                            const RiccatiSolution& y2, const InequalitySolution& eta1,
                                            const InequalitySolution& eta2, double y_init, double t0,
                                            const Interval& I, double tol = kDefaultResidualTol) {
  Theorem21Report r;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    r.preconditions.push_back({std::move(name), ok, std::move(detail)});
  };
  if (t0 != I.lo) throw PreconditionError("theorem21_hypothesis: t0 must be the left end of I");
  const bool pole_free = poles(y2, I).empty();
  add("y2 pole-free on I", pole_free);
  add("f1 >= 0 on I", sys1.f.nonnegative_on(I));
  const double y20 = y2.y(t0);
  add("y2(t0) <= eta1(t0)", y20 <= eta1(t0) + tol);
  add("y2(t0) <= eta2(t0)", y20 <= eta2(t0) + tol);
  add("y_init in [y2(t0), eta1(t0)]", y_init >= y20 - tol && y_init <= eta1(t0) + tol);
  const bool pre_ok = std::all_of(r.preconditions.begin(), r.preconditions.end(), [](const auto& c) { return c.ok; });
  if (!pole_free) return r;

  auto weight = [&](double t) { return sys1.f.eval(t) * (eta1(t) + eta2(t)); };
  auto integrand = [&](double t) {
    const double y = y2.y(t);
    return (sys2.f.eval(t) - sys1.f.eval(t)) * y * y + sys2.g.eval(t) - sys1.g.eval(t);
  };
  auto knots = sys1.knots();
  const auto k2 = sys2.knots();
  knots.insert(knots.end(), k2.begin(), k2.end());
  const auto w = weighted_integral(weight, integrand, I.lo, I.hi, knots, std::min(1e-10, tol * 1e-2));
  const double base = y_init - y20;
  const auto e = w.dense.extrema(1, I.lo, I.hi);
  r.min_margin = std::min(base, base + e.min);
  if (r.min_margin < 0.0) r.witness = base < base + e.min ? I.lo : e.argmin;
  r.holds = pre_ok && r.min_margin >= -tol;
  return r;
}

}  // namespace sturmlab
