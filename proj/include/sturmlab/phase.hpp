#pragma once

// Amplitude-phase form phi = mu / sqrt(y) * sin(Phi) with Phi = int_a^t f y + theta,
// where z = x + i y solves the complex Riccati equation with z(a) = i.
// Null-elements are the places where Phi sits on a multiple of pi; null-classes
// group elements that are joined by a phase excursion of less than pi.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sturmlab/linsys.hpp"
#include "sturmlab/riccati.hpp"

namespace sturmlab {

inline constexpr double kDefaultPhaseEps = 1e-7;
inline constexpr double kDefaultMergeGap = 1e-8;

struct PhaseDecomposition {
  ComplexPhaseSolution cps;
  State init;
  double mu;
  double theta;

  Interval domain() const { return cps.domain(); }
  const SystemCoefficients& sys() const { return cps.sys(); }
  double Phi(double t) const { return cps.phase_integral(t) + theta; }
  double y(double t) const { return cps.y(t); }
};

inline PhaseDecomposition decompose(const SystemCoefficients& sys, State init, double tol = kDefaultIntegrationTol) {
  if (!init.finite() || !init.nontrivial()) throw PreconditionError("decompose: initial state must be finite and nonzero");
  auto cps = solve_complex_phase(sys, sys.domain().lo, tol);
  return PhaseDecomposition{std::move(cps), init, std::hypot(init.phi, init.psi), std::atan2(init.phi, init.psi)};
}

inline double reconstruct_phi(const PhaseDecomposition& d, double t) {
  return d.mu / std::sqrt(d.y(t)) * std::sin(d.Phi(t));
}

/// min and max of Phi over [lo, hi], exact on the dense interpolant.
inline std::pair<double, double> phase_range(const PhaseDecomposition& d, double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  const auto e = d.cps.dense().extrema(2, lo, hi);
  return {e.min + d.theta, e.max + d.theta};
}

enum class ElementKind { Point, Continuum, Tangency };

inline const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Point: return "point";
    case ElementKind::Continuum: return "continuum";
    case ElementKind::Tangency: return "tangency";
  }
  return "?";
}

struct NullElement {
  Span span;
  long level;  // Phi == level * pi on the span
  ElementKind kind = ElementKind::Point;
};

inline bool precedes(const Span& a, const Span& b) { return a.hi < b.lo; }
inline bool precedes(const NullElement& a, const NullElement& b) { return precedes(a.span, b.span); }

/// Elements of Phi on I, ascending. Each dense step is treated on its own:
///  - where f vanishes identically Phi is an exact constant, and the whole step
///    is a continuum element when that constant is within eps of k pi;
///  - where f is sign-definite Phi is monotone and each level crossing is
///    located by bracketing the endpoint values;
///  - otherwise roots of the interpolant are used, and an interior extremum
///    within eps of k pi without a sign change becomes a tangency point.
/// Same-level pieces separated by at most merge_gap are fused.
inline std::vector<NullElement> null_elements(const PhaseDecomposition& d, const Interval& I,
                                              double eps = kDefaultPhaseEps, double merge_gap = kDefaultMergeGap) {
  if (!d.domain().contains(I)) throw DomainError("null_elements: interval outside decomposition domain");
  constexpr double pi = std::numbers::pi;
  const auto& f = d.sys().f;
  std::vector<NullElement> raw;
  for (const auto& s : d.cps.dense().steps()) {
    if (s.hi() < I.lo || s.lo() > I.hi) continue;
    const double lo = std::max(I.lo, s.lo()), hi = std::min(I.hi, s.hi());
    const double pa = std::clamp(s.param(lo), 0.0, 1.0), pb = std::clamp(s.param(hi), 0.0, 1.0);
    if (f.identically_zero_on(s.lo(), s.hi())) {
      const double Phi = s.y0[2] + d.theta;
      const double k = std::round(Phi / pi);
      if (std::abs(Phi - k * pi) <= eps)
        raw.push_back({{lo, hi}, static_cast<long>(k), lo == hi ? ElementKind::Point : ElementKind::Continuum});
      continue;
    }
    const auto fr = f.range(s.lo(), s.hi());
    const double sl = CoefficientFn::sign_slack(fr.first, fr.second);
    const bool monotone = fr.first >= -sl || fr.second <= sl;
    auto m = s.monomial(2);
    const auto ex = poly::extrema(m, pa, pb);
    const long kmin = static_cast<long>(std::ceil((ex.min + d.theta - eps) / pi));
    const long kmax = static_cast<long>(std::floor((ex.max + d.theta + eps) / pi));
    for (long k = kmin; k <= kmax; ++k) {
      const double level = static_cast<double>(k) * pi - d.theta;
      const auto roots = s.crossings(2, level, pa, pb, monotone);
      for (double r : roots) {
        const double t = s.time_at(r);
        raw.push_back({{t, t}, k, ElementKind::Point});
      }
      if (!roots.empty() || monotone) continue;
      for (const auto& [v, at] : {std::pair{ex.min, ex.argmin}, std::pair{ex.max, ex.argmax}}) {
        if (at > pa && at < pb && std::abs(v - level) <= eps) {
          const double t = s.time_at(at);
          raw.push_back({{t, t}, k, ElementKind::Tangency});
        }
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const NullElement& a, const NullElement& b) {
    return a.span.lo < b.span.lo || (a.span.lo == b.span.lo && a.level < b.level);
  });
  std::vector<NullElement> out;
  for (const auto& e : raw) {
    if (!out.empty() && out.back().level == e.level && e.span.lo - out.back().span.hi <= merge_gap) {
      auto& b = out.back();
      b.span.hi = std::max(b.span.hi, e.span.hi);
      if (e.kind == ElementKind::Continuum || !b.span.is_point()) b.kind = ElementKind::Continuum;
      continue;
    }
    out.push_back(e);
  }
  return out;
}

enum class Congeniality { Congenerous, NotCongenerous, Indeterminate };

/// Two elements are congenerous when they share a level and Phi stays within
/// pi of that level (minus eps) in between; within eps of pi the answer is
/// Indeterminate.
inline Congeniality congeniality(const PhaseDecomposition& d, const NullElement& a, const NullElement& b,
                                 double eps = kDefaultPhaseEps) {
  constexpr double pi = std::numbers::pi;
  if (a.level != b.level) return Congeniality::NotCongenerous;
  const NullElement& first = a.span.lo <= b.span.lo ? a : b;
  const NullElement& second = a.span.lo <= b.span.lo ? b : a;
  if (second.span.lo <= first.span.hi) return Congeniality::Congenerous;
  const auto [lo, hi] = phase_range(d, first.span.hi, second.span.lo);
  const double c = static_cast<double>(a.level) * pi;
  const double excursion = std::max(std::abs(hi - c), std::abs(lo - c));
  if (excursion < pi - eps) return Congeniality::Congenerous;
  if (excursion > pi + eps) return Congeniality::NotCongenerous;
  return Congeniality::Indeterminate;
}

struct NullClass {
  std::vector<NullElement> elements;
  Span hull;
  long level() const { return elements.front().level; }
};

inline bool precedes(const NullClass& a, const NullClass& b) { return precedes(a.hull, b.hull); }

struct NullClassChain {
  std::vector<NullClass> classes;
  std::vector<std::string> warnings;
};

/// Groups consecutive congenerous elements. Elements are ordered in time, so
/// a class is a run of same-level elements; an indeterminate decision splits
/// the run and is reported.
inline NullClassChain null_classes(const PhaseDecomposition& d, const Interval& I, double eps = kDefaultPhaseEps,
                                   double merge_gap = kDefaultMergeGap) {
  NullClassChain chain;
  for (const NullElement& e : null_elements(d, I, eps, merge_gap)) {
    if (!chain.classes.empty()) {
      NullClass& c = chain.classes.back();
      const Congeniality r = congeniality(d, c.elements.back(), e, eps);
      if (r == Congeniality::Congenerous) {
        c.elements.push_back(e);
        c.hull.hi = std::max(c.hull.hi, e.span.hi);
        continue;
      }
      if (r == Congeniality::Indeterminate)
        chain.warnings.push_back("congeniality undecided between elements at t=" + std::to_string(c.elements.back().span.hi) +
                                 " and t=" + std::to_string(e.span.lo) + "; treated as separate classes");
    }
    chain.classes.push_back({{e}, e.span});
  }
  return chain;
}

/// Classes whose hull lies in (lo, hi] widened by `slack` on both sides.
/// Open or closed ends are selected by the flags.
inline std::vector<NullClass> classes_in(const NullClassChain& chain, double lo, double hi, bool lo_open, bool hi_open,
                                         double slack = kDefaultMergeGap) {
  std::vector<NullClass> out;
  for (const auto& c : chain.classes) {
    const bool ok_lo = lo_open ? c.hull.lo > lo + slack : c.hull.lo >= lo - slack;
    const bool ok_hi = hi_open ? c.hull.hi < hi - slack : c.hull.hi <= hi + slack;
    if (ok_lo && ok_hi) out.push_back(c);
  }
  return out;
}

}  // namespace sturmlab
