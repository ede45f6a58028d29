#pragma once

// Solutions of phi' = f(t) psi, psi' = -g(t) phi with dense output, and the
// reduction of (p phi')' + q phi = 0 to that form.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "sturmlab/coeff.hpp"
#include "sturmlab/ode.hpp"

namespace sturmlab {

inline constexpr double kDefaultIntegrationTol = 1e-10;

struct State {
  double phi = 0.0;
  double psi = 0.0;

  bool finite() const { return std::isfinite(phi) && std::isfinite(psi); }
  bool nontrivial() const { return phi != 0.0 || psi != 0.0; }
  friend bool operator==(const State&, const State&) = default;
};

/// A closed span (possibly a single point) of the time axis.
struct Span {
  double lo;
  double hi;
  bool is_point() const { return lo == hi; }
  friend bool operator==(const Span&, const Span&) = default;
};

class Trajectory {
 public:
  Trajectory(SystemCoefficients sys, Interval domain, double t_init, State init, double tol,
             ode::DenseSolution<2> dense)
      : sys_(std::move(sys)), domain_(domain), t_init_(t_init), init_(init), tol_(tol), dense_(std::move(dense)) {}

  const SystemCoefficients& sys() const { return sys_; }
  const Interval& domain() const { return domain_; }
  double t_init() const { return t_init_; }
  const State& init() const { return init_; }
  double tol() const { return tol_; }
  const ode::DenseSolution<2>& dense() const { return dense_; }
  std::vector<double> mesh() const { return dense_.mesh(); }

  State eval(double t) const {
    if (!domain_.contains(t)) throw DomainError("trajectory evaluated outside its domain");
    if (t == t_init_) return init_;
    const auto y = dense_.eval(t);
    return {y[0], y[1]};
  }
  State operator()(double t) const { return eval(t); }
  double phi(double t) const { return eval(t).phi; }
  double psi(double t) const { return eval(t).psi; }

  /// Zero set of phi on [lo, hi]: isolated roots of the step interpolants as
  /// points, and steps on which phi vanishes identically (possible only where
  /// f is identically zero) as intervals. Touching pieces are merged.
  std::vector<Span> phi_zero_set(double lo, double hi) const {
    std::vector<Span> raw;
    for (const auto& s : dense_.steps()) {
      if (s.hi() < lo || s.lo() > hi) continue;
      const auto m = s.monomial(0);
      if (poly::is_zero(m)) {
        raw.push_back({std::max(lo, s.lo()), std::min(hi, s.hi())});
        continue;
      }
      double pa = std::clamp(s.param(std::max(lo, s.lo())), 0.0, 1.0);
      double pb = std::clamp(s.param(std::min(hi, s.hi())), 0.0, 1.0);
      if (pa > pb) std::swap(pa, pb);
      // phi' = f psi: monotone when f is sign-definite and psi keeps its sign.
      const auto fr = sys_.f.range(s.lo(), s.hi());
      const auto pr = poly::extrema(s.monomial(1), 0.0, 1.0);
      const double sl = CoefficientFn::sign_slack(fr.first, fr.second);
      const bool monotone = (fr.first >= -sl || fr.second <= sl) && (pr.min > 0.0 || pr.max < 0.0);
      for (double r : s.crossings(0, 0.0, pa, pb, monotone)) {
        const double t = s.time_at(r);
        raw.push_back({t, t});
      }
    }
    std::sort(raw.begin(), raw.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
    std::vector<Span> out;
    for (const auto& z : raw) {
      if (!out.empty() && z.lo <= out.back().hi) {
        out.back().hi = std::max(out.back().hi, z.hi);
      } else {
        out.push_back(z);
      }
    }
    return out;
  }

 private:
  SystemCoefficients sys_;
  Interval domain_;
  double t_init_;
  State init_;
  double tol_;
  ode::DenseSolution<2> dense_;
};

namespace detail {

// The absolute part is measured against the initial amplitude: the system is
// linear, so scaling the initial state then scales the whole computation and
// leaves the step sequence unchanged.
inline ode::Options linsys_options(const SystemCoefficients& sys, double tol, const State& init) {
  ode::Options o;
  const double amp = std::hypot(init.phi, init.psi);
  o.rtol = tol;
  o.atol = tol * (amp > 0 ? amp : 1.0);
  o.breakpoints = sys.knots();
  return o;
}

}  // namespace detail

/// Integrates from an arbitrary t_init inside I, forwards and backwards.
inline Trajectory integrate_system_from(const SystemCoefficients& sys, State init, double t_init, const Interval& I,
                                        double tol = kDefaultIntegrationTol) {
  if (!sys.domain().contains(I)) throw DomainError("integration interval outside system domain");
  if (!I.contains(t_init)) throw DomainError("initial time outside integration interval");
  if (!init.finite()) throw PreconditionError("initial state must be finite");
  if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
  auto rhs = [&sys](double t, const ode::Vec<2>& y, double ref) -> ode::Vec<2> {
    return {sys.f.eval_near(t, ref) * y[1], -sys.g.eval_near(t, ref) * y[0]};
  };
  const auto opt = detail::linsys_options(sys, tol, init);
  const ode::Vec<2> y0{init.phi, init.psi};
  auto fwd = ode::integrate<2>(rhs, t_init, y0, I.hi, opt);
  auto bwd = ode::integrate<2>(rhs, t_init, y0, I.lo, opt);
  return Trajectory(sys, I, t_init, init, tol, ode::DenseSolution<2>::join(bwd, fwd));
}

inline Trajectory integrate_system(const SystemCoefficients& sys, State init, const Interval& I,
                                   double tol = kDefaultIntegrationTol) {
  return integrate_system_from(sys, init, I.lo, I, tol);
}

inline State eval_trajectory(const Trajectory& tr, double t) { return tr.eval(t); }

/// (p phi')' + q phi = 0  ->  phi' = (1/p) psi, psi' = -q phi with psi = p phi'.
inline SystemCoefficients from_sturm_liouville(const CoefficientFn& p, const CoefficientFn& q) {
  return SystemCoefficients(p.reciprocal(), q);
}

/// Columns t,phi,psi at `samples` uniformly spaced points (endpoints included).
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr, std::size_t samples) {
  const std::size_t n = std::max<std::size_t>(samples, 2);
  os << "t,phi,psi\n";
  char buf[128];
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? tr.domain().hi
                                : tr.domain().lo + tr.domain().length() * static_cast<double>(i) /
                                                       static_cast<double>(n - 1);
    const State s = tr.eval(t);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, s.phi, s.psi);
    os << buf;
  }
}

}  // namespace sturmlab
