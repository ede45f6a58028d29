#pragma once

// Majorant checkers and comparison-theorem verifiers.
//
// Orientation follows the conventions of the two settings:
//  - classical equations: (p2, q2) majorizes (p1, q1) when p1 >= p2 > 0 and
//    q1 <= q2, and the conclusion is about zeros of phi2;
//  - systems / quarters: system 1 majorizes system 2 (f1 >= f2 >= 0, g1 >= g2),
//    and the conclusion is about null-classes of phi1.
//
// Every "for all t" hypothesis on coefficients goes through pointwise_compare
// (a found violation is definitive, passing is grid-certified). The "any eta"
// clause of condition 3_2 is checked over a finite lambda family.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sturmlab/coeff.hpp"
#include "sturmlab/linsys.hpp"
#include "sturmlab/phase.hpp"
#include "sturmlab/riccati.hpp"

namespace sturmlab {

enum class Verdict { StrictMajorant, Majorant, NotMajorant, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictMajorant: return "StrictMajorant";
    case Verdict::Majorant: return "Majorant";
    case Verdict::NotMajorant: return "NotMajorant";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

enum class Outcome { Pass, Fail, Undetermined, Skipped };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Undetermined: return "undetermined";
    case Outcome::Skipped: return "skipped";
  }
  return "?";
}

struct ConditionResult {
  std::string name;
  Outcome outcome = Outcome::Skipped;
  std::optional<double> witness;
  double margin = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
  bool passed() const { return outcome == Outcome::Pass; }
};

struct EtaFamilySummary {
  std::vector<double> lambda_offsets;  // added to y2(xi) for each eta
  std::size_t pairs_per_xi = 0;
  std::size_t evaluations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min over accepted xi of min J
};

struct MajorantReport {
  Verdict verdict = Verdict::Undetermined;
  std::vector<ConditionResult> conditions;
  std::vector<double> xi;  // one accepted xi per gap
  EtaFamilySummary eta;
  std::vector<std::string> notes;

  bool is_majorant() const { return verdict == Verdict::Majorant || verdict == Verdict::StrictMajorant; }
  bool is_strict() const { return verdict == Verdict::StrictMajorant; }
  const ConditionResult* find(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct CompareParams {
  std::size_t grid = 2048;          // pointwise_compare points per check
  double compare_tol = 1e-12;       // slack for non-strict coefficient inequalities
  double strict_tol = 1e-8;         // margin required for strict inequalities
  double integration_tol = kDefaultIntegrationTol;
  double phase_eps = kDefaultPhaseEps;
  double class_slack = 1e-7;        // tolerance when placing class hulls in (lo, hi]
};

struct QuarterParams : CompareParams {
  std::size_t xi_grid = 32;
  std::vector<double> lambda_offsets{1e-3, 1.0, 10.0};
  double tol = 1e-8;  // 3_2 integrals must be >= -tol
};

namespace detail {

inline ConditionResult compare_condition(std::string name, const CoefficientFn& hi, const CoefficientFn& lo,
                                         const Interval& I, const CompareParams& p) {
  const auto r = pointwise_compare(hi, lo, I, p.grid, p.compare_tol);
  ConditionResult c{std::move(name)};
  c.outcome = r.ge_everywhere ? Outcome::Pass : Outcome::Fail;
  c.margin = r.min_margin;
  c.witness = r.ge_everywhere ? std::optional<double>(r.min_at) : r.violated_at;
  c.detail = "grid-certified on " + std::to_string(r.points) + " points";
  return c;
}

inline ConditionResult positivity_condition(std::string name, const CoefficientFn& c, const Interval& I, bool strict) {
  ConditionResult r{std::move(name)};
  r.margin = c.range(I).first;
  r.outcome = (strict ? c.positive_on(I) : c.nonnegative_on(I)) ? Outcome::Pass : Outcome::Fail;
  r.detail = "exact piecewise range";
  if (!r.passed()) {
    // first failing piece, argmin on a fine sample of it
    for (const auto& p : c.pieces()) {
      const double a = std::max(p.from, I.lo), b = std::min(p.to, I.hi);
      if (a > b) continue;
      const Interval J(a, b);
      if (strict ? c.positive_on(J) : c.nonnegative_on(J)) continue;
      double best = c.eval(a), at = a;
      for (int i = 1; i <= 200; ++i) {
        const double t = a + (b - a) * i / 200.0, v = c.eval(t);
        if (v < best) best = v, at = t;
      }
      r.witness = at;
      break;
    }
  }
  return r;
}

// Sample points for existence clauses: uniform grid plus knots.
inline std::vector<double> scan_points(const Interval& I, std::size_t n, const std::vector<double>& knots) {
  std::vector<double> ts;
  n = std::max<std::size_t>(n, 2);
  for (std::size_t i = 0; i < n; ++i) ts.push_back(I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n - 1));
  ts.back() = I.hi;
  for (double k : knots)
    if (I.contains(k)) ts.push_back(k);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

// First t in I with a(t) - b(t) > tol and |c(t)| > tol.
inline std::optional<double> find_gt_and_nonzero(const CoefficientFn& a, const CoefficientFn& b, const CoefficientFn& c,
                                                 const Interval& I, const CompareParams& p) {
  auto knots = a.knots();
  for (double k : b.knots()) knots.push_back(k);
  for (double k : c.knots()) knots.push_back(k);
  for (double t : scan_points(I, p.grid, knots))
    if (a.eval(t) - b.eval(t) > p.strict_tol && std::abs(c.eval(t)) > p.strict_tol) return t;
  return std::nullopt;
}

inline ConditionResult existence_condition(std::string name, std::optional<double> w) {
  ConditionResult r{std::move(name)};
  r.outcome = w ? Outcome::Pass : Outcome::Fail;
  r.witness = w;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Initial-ratio conventions

/// psi/phi with the +inf convention at a zero of phi.
struct Ratio {
  double value;
  bool infinite;
};

inline Ratio initial_ratio(const State& s) {
  const double scale = std::hypot(s.phi, s.psi);
  if (std::abs(s.phi) <= 1e-12 * scale) return {std::numeric_limits<double>::infinity(), true};
  return {s.psi / s.phi, false};
}

/// Checks small <= big under the +inf conventions; strict when big - small > tol.
inline ConditionResult ratio_condition(std::string name, const Ratio& small, const Ratio& big, double tol) {
  ConditionResult r{std::move(name)};
  if (big.infinite) {
    r.outcome = Outcome::Pass;
    r.margin = small.infinite ? 0.0 : std::numeric_limits<double>::infinity();
    r.detail = small.infinite ? "both sides +inf (double zero): holds with equality" : "right side +inf";
    return r;
  }
  if (small.infinite) {
    r.outcome = Outcome::Fail;
    r.margin = -std::numeric_limits<double>::infinity();
    r.detail = "left side +inf, right side finite";
    return r;
  }
  r.margin = big.value - small.value;
  r.outcome = r.margin >= -tol ? Outcome::Pass : Outcome::Fail;
  return r;
}

inline bool ratio_strict(const ConditionResult& c, double tol) { return c.passed() && c.margin > tol; }

// ---------------------------------------------------------------------------
// Classical and system majorants

/// (p2, q2) majorizes (p1, q1): p1 >= p2 > 0 and q1 <= q2; strict if q1 < q2
/// somewhere, or p1 > p2 and q2 != 0 at some common point.
inline MajorantReport sturm_majorant_eq(const CoefficientFn& p1, const CoefficientFn& q1, const CoefficientFn& p2,
                                        const CoefficientFn& q2, const Interval& I, const CompareParams& prm = {}) {
  MajorantReport r;
  r.conditions.push_back(detail::compare_condition("p1 >= p2", p1, p2, I, prm));
  r.conditions.push_back(detail::positivity_condition("p2 > 0", p2, I, true));
  r.conditions.push_back(detail::compare_condition("q2 >= q1", q2, q1, I, prm));
  const bool ok = std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.passed(); });
  if (!ok) {
    r.verdict = Verdict::NotMajorant;
    return r;
  }
  const auto gq = pointwise_compare(q2, q1, I, prm.grid, prm.strict_tol).gt_witness;
  r.conditions.push_back(detail::existence_condition("q1 < q2 somewhere", gq));
  const auto gp = detail::find_gt_and_nonzero(p1, p2, q2, I, prm);
  r.conditions.push_back(detail::existence_condition("p1 > p2 and q2 != 0 somewhere", gp));
  r.verdict = (gq || gp) ? Verdict::StrictMajorant : Verdict::Majorant;
  return r;
}

/// sys2 majorizes sys1 in the classical sense: f2 >= f1 > 0 and g2 >= g1;
/// strict if g2 > g1 somewhere, or f2 > f1 and g2 != 0 somewhere.
inline MajorantReport sturm_majorant_system(const SystemCoefficients& sys1, const SystemCoefficients& sys2,
                                            const Interval& I, const CompareParams& prm = {}) {
  MajorantReport r;
  r.conditions.push_back(detail::compare_condition("f2 >= f1", sys2.f, sys1.f, I, prm));
  r.conditions.push_back(detail::positivity_condition("f1 > 0", sys1.f, I, true));
  r.conditions.push_back(detail::compare_condition("g2 >= g1", sys2.g, sys1.g, I, prm));
  const bool ok = std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.passed(); });
  if (!ok) {
    r.verdict = Verdict::NotMajorant;
    return r;
  }
  const auto gg = pointwise_compare(sys2.g, sys1.g, I, prm.grid, prm.strict_tol).gt_witness;
  r.conditions.push_back(detail::existence_condition("g2 > g1 somewhere", gg));
  const auto gf = detail::find_gt_and_nonzero(sys2.f, sys1.f, sys2.g, I, prm);
  r.conditions.push_back(detail::existence_condition("f2 > f1 and g2 != 0 somewhere", gf));
  r.verdict = (gg || gf) ? Verdict::StrictMajorant : Verdict::Majorant;
  return r;
}

/// sys1 majorizes sys2: f1 >= f2 >= 0 and g1 >= g2; strict when additionally
/// f2 > 0 and (f1 > f2 with g1 != 0 somewhere, or g1 > g2 somewhere).
inline MajorantReport system_majorant(const SystemCoefficients& sys1, const SystemCoefficients& sys2,
                                      const Interval& I, const CompareParams& prm = {}) {
  MajorantReport r;
  r.conditions.push_back(detail::compare_condition("1: f1 >= f2", sys1.f, sys2.f, I, prm));
  r.conditions.push_back(detail::positivity_condition("1: f2 >= 0", sys2.f, I, false));
  r.conditions.push_back(detail::compare_condition("2: g1 >= g2", sys1.g, sys2.g, I, prm));
  const bool ok = std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.passed(); });
  if (!ok) {
    r.verdict = Verdict::NotMajorant;
    return r;
  }
  r.verdict = Verdict::Majorant;
  auto fpos = detail::positivity_condition("strict: f2 > 0", sys2.f, I, true);
  const bool f_pos = fpos.passed();
  r.conditions.push_back(std::move(fpos));
  if (!f_pos) {
    r.notes.push_back("f2 is not positive throughout; strictness impossible");
    return r;
  }
  const auto w1 = detail::find_gt_and_nonzero(sys1.f, sys2.f, sys1.g, I, prm);
  r.conditions.push_back(detail::existence_condition("1': f1 > f2 and g1 != 0 somewhere", w1));
  const auto w2 = pointwise_compare(sys1.g, sys2.g, I, prm.grid, prm.strict_tol).gt_witness;
  r.conditions.push_back(detail::existence_condition("2': g1 > g2 somewhere", w2));
  if (w1 || w2) r.verdict = Verdict::StrictMajorant;
  return r;
}

// ---------------------------------------------------------------------------
// Null-class bookkeeping shared by the theorem verifiers

/// Null-class chain of the solution through `s0` at lo, on [lo, hi].
inline NullClassChain chain_on(const SystemCoefficients& sys, const State& s0, const Interval& I,
                               const CompareParams& p) {
  const auto dec = decompose(sys.restricted(I), s0, p.integration_tol);
  return null_classes(dec, I, p.phase_eps);
}

/// The classes of phi2 beyond t0 and tau_0. A class containing t0 itself is
/// not counted; tau_0 is then its right end, otherwise tau_0 = t0.
struct ClassGaps {
  double tau0;
  std::vector<NullClass> classes;  // N_1 .. N_n
  bool dropped_initial = false;

  std::size_t n() const { return classes.size(); }
  double tau(std::size_t k) const { return k == 0 ? tau0 : classes[k - 1].hull.hi; }
  double t(std::size_t k) const { return classes[k - 1].hull.lo; }  // k = 1..n
};

inline ClassGaps class_gaps(const NullClassChain& chain, double t0, double slack) {
  ClassGaps g{t0, {}, false};
  for (const auto& c : chain.classes) {
    if (c.hull.lo <= t0 + slack && !g.dropped_initial && g.classes.empty()) {
      g.tau0 = std::max(t0, c.hull.hi);
      g.dropped_initial = true;
      continue;
    }
    g.classes.push_back(c);
  }
  return g;
}

struct IntervalCheck {
  std::size_t k;
  double lo;  // open end
  double hi;  // closed end
  std::vector<Span> found;
  bool ok() const { return !found.empty(); }
};

struct CountCheck {
  std::string description;
  double lo;
  double hi;
  std::size_t required;
  std::size_t found;
  bool ok() const { return found >= required; }
};

struct TheoremVerdict {
  MajorantReport hypothesis_report;
  bool vacuous = false;
  std::string vacuous_reason;
  std::vector<std::size_t> expected;  // required counts per interval
  std::vector<std::size_t> observed;
  std::vector<IntervalCheck> details;
  std::optional<CountCheck> count_check;
  bool conclusion_holds = true;
  std::vector<std::string> warnings;
  std::vector<Span> reference_classes;  // hulls of the counted comparison classes
  std::vector<Span> subject_classes;    // hulls of the classes being counted
};

namespace detail {

inline std::vector<Span> hulls(const std::vector<NullClass>& cs) {
  std::vector<Span> out;
  for (const auto& c : cs) out.push_back(c.hull);
  return out;
}

inline std::size_t count_in(const NullClassChain& chain, double lo, double hi, bool hi_open, double slack) {
  return classes_in(chain, lo, hi, true, hi_open, slack).size();
}

inline void finish(TheoremVerdict& v) {
  bool ok = true;
  for (std::size_t i = 0; i < v.expected.size(); ++i) ok = ok && v.observed[i] >= v.expected[i];
  if (v.count_check) ok = ok && v.count_check->ok();
  v.conclusion_holds = v.vacuous || ok;
}

inline void append_warnings(TheoremVerdict& v, const NullClassChain& c, const char* who) {
  for (const auto& w : c.warnings) v.warnings.push_back(std::string(who) + ": " + w);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quarter majorant

inline MajorantReport quarter_majorant(const Trajectory& sol1, const SystemCoefficients& sys1,
                                       const Trajectory& sol2, const SystemCoefficients& sys2, double t0, double t_end,
                                       const QuarterParams& prm = {}) {
  const Interval I(t0, t_end);
  const State s1 = sol1.eval(t0), s2 = sol2.eval(t0);
  if (!s2.nontrivial()) throw PreconditionError("quarter_majorant: phi2 is the trivial solution");
  MajorantReport r;
  r.eta.lambda_offsets = prm.lambda_offsets;
  r.eta.pairs_per_xi = prm.lambda_offsets.size() * prm.lambda_offsets.size();

  const Ratio r1 = initial_ratio(s1), r2 = initial_ratio(s2);
  auto c1 = ratio_condition("1: psi1/phi1 <= psi2/phi2 at t0", r1, r2, prm.strict_tol);
  const bool c1_strict = ratio_strict(c1, prm.strict_tol);
  r.conditions.push_back(c1);
  auto c2a = detail::compare_condition("2: f1 >= f2", sys1.f, sys2.f, I, prm);
  auto c2b = detail::positivity_condition("2: f2 >= 0", sys2.f, I, false);
  const bool c2 = c2a.passed() && c2b.passed();
  r.conditions.push_back(c2a);
  r.conditions.push_back(c2b);

  const auto chain2 = chain_on(sys2, s2, I, prm);
  for (const auto& w : chain2.warnings) r.notes.push_back("phi2: " + w);
  const ClassGaps gaps = class_gaps(chain2, t0, prm.class_slack);
  const std::size_t n = gaps.n();
  if (gaps.dropped_initial) r.notes.push_back("phi2 null-class at t0 excluded; tau_0 = " + std::to_string(gaps.tau0));

  if (!c1.passed() || !c2) {
    ConditionResult c3{"3: xi_k search"};
    c3.detail = "not evaluated: conditions 1/2 failed";
    r.conditions.push_back(c3);
    r.verdict = Verdict::NotMajorant;
    return r;
  }

  const auto knots = [&] {
    auto k = sys1.knots();
    for (double v : sys2.knots()) k.push_back(v);
    return k;
  }();
  auto g_diff = [&](double t) { return sys1.g.eval(t) - sys2.g.eval(t); };

  bool undetermined = false, all_found = true, any_3prime = false;
  std::vector<double> xi_per_gap;
  for (std::size_t k = 0; k < n; ++k) {
    const double tau_k = gaps.tau(k), t_next = gaps.t(k + 1);
    const std::string tag = "[k=" + std::to_string(k) + "]";
    if (!(t_next - tau_k > 1e-9)) {
      ConditionResult c{"3: xi_k " + tag, Outcome::Undetermined};
      c.detail = "gap (tau_k, t_{k+1}) too narrow";
      r.conditions.push_back(c);
      undetermined = true;
      all_found = false;
      continue;
    }
    std::optional<ConditionResult> first_failure;
    bool found = false;
    for (std::size_t j = 1; j <= prm.xi_grid && !found; ++j) {
      const double xi = tau_k + (t_next - tau_k) * static_cast<double>(j) / static_cast<double>(prm.xi_grid + 1);
      const auto c31 = pointwise_compare(sys1.g, sys2.g, Interval(tau_k, xi), prm.grid, prm.compare_tol);
      if (!c31.ge_everywhere) {
        if (!first_failure) {
          first_failure = ConditionResult{"3_1: g1 >= g2 on [tau_k, xi_k] " + tag, Outcome::Fail, c31.violated_at,
                                          c31.min_margin, "xi=" + std::to_string(xi)};
        }
        continue;
      }
      const State sx = sol2.eval(xi);
      const double y2 = sx.psi / sx.phi;
      double worst = std::numeric_limits<double>::infinity(), worst_at = xi, min_final = worst;
      for (double o1 : prm.lambda_offsets) {
        const auto eta1 = eta_from_lambda(sys1, xi, y2 + o1, t_next);
        for (double o2 : prm.lambda_offsets) {
          const auto eta2 = eta_from_lambda(sys2, xi, y2 + o2, t_next);
          auto weight = [&](double t) { return sys2.f.eval(t) * (eta1(t) + eta2(t)); };
          const auto w = weighted_integral(weight, g_diff, xi, t_next, knots, prm.integration_tol);
          ++r.eta.evaluations;
          if (w.min_value < worst) {
            worst = w.min_value;
            worst_at = w.min_at;
          }
          min_final = std::min(min_final, w.final_value);
        }
      }
      if (worst < -prm.tol) {
        if (!first_failure) {
          first_failure = ConditionResult{"3_2: weighted integral on [xi_k, t_{k+1}] " + tag, Outcome::Fail, worst_at,
                                          worst, "xi=" + std::to_string(xi)};
        }
        continue;
      }
      found = true;
      xi_per_gap.push_back(xi);
      r.eta.worst_margin = std::min(r.eta.worst_margin, worst);
      ConditionResult c{"3: xi_k " + tag, Outcome::Pass, xi, worst};
      c.detail = "candidate " + std::to_string(j) + "/" + std::to_string(prm.xi_grid);
      r.conditions.push_back(c);
      if (min_final > prm.strict_tol) {
        any_3prime = true;
        r.conditions.push_back({"3': integral to t_{k+1} positive " + tag, Outcome::Pass, t_next, min_final});
      }
    }
    if (!found) {
      all_found = false;
      r.conditions.push_back(first_failure.value_or(ConditionResult{"3: xi_k " + tag, Outcome::Fail}));
    }
  }
  r.xi = xi_per_gap;
  if (n == 0) r.notes.push_back("phi2 has no null-classes beyond t0: condition 3 is vacuous");

  if (!all_found) {
    r.verdict = undetermined ? Verdict::Undetermined : Verdict::NotMajorant;
    return r;
  }
  r.verdict = Verdict::Majorant;

  // Strictness.
  auto fpos = detail::positivity_condition("strict: f2 > 0", sys2.f, I, true);
  const bool f_pos = fpos.passed();
  r.conditions.push_back(std::move(fpos));
  if (!f_pos) return r;
  bool strict = c1_strict;
  if (c1_strict) r.conditions.push_back({"strict: condition 1 strict", Outcome::Pass, t0, c1.margin});
  const auto w1 = detail::find_gt_and_nonzero(sys1.f, sys2.f, sys1.g, I, prm);
  r.conditions.push_back(detail::existence_condition("1': f1 > f2 and g1 != 0 somewhere", w1));
  strict = strict || w1.has_value();
  std::optional<double> w2;
  for (std::size_t k = 1; k < n && !w2; ++k)
    w2 = pointwise_compare(sys1.g, sys2.g, Interval(gaps.tau(k), r.xi[k]), prm.grid, prm.strict_tol).gt_witness;
  r.conditions.push_back(detail::existence_condition("2': g1 > g2 on some [tau_k, xi_k], k >= 1", w2));
  strict = strict || w2.has_value() || any_3prime;
  if (strict) r.verdict = Verdict::StrictMajorant;
  return r;
}

// ---------------------------------------------------------------------------
// Theorem verifiers

inline TheoremVerdict verify_theorem31(const Trajectory& sol1, const SystemCoefficients& sys1, const Trajectory& sol2,
                                       const SystemCoefficients& sys2, double t0, double t_end,
                                       const QuarterParams& prm = {}) {
  TheoremVerdict v;
  v.hypothesis_report = quarter_majorant(sol1, sys1, sol2, sys2, t0, t_end, prm);
  const Interval I(t0, t_end);
  const State s1 = sol1.eval(t0);
  if (!s1.nontrivial()) throw PreconditionError("verify_theorem31: phi1 is the trivial solution");
  const auto chain2 = chain_on(sys2, sol2.eval(t0), I, prm);
  const auto chain1 = chain_on(sys1, s1, I, prm);
  detail::append_warnings(v, chain1, "phi1");
  detail::append_warnings(v, chain2, "phi2");
  const ClassGaps gaps = class_gaps(chain2, t0, prm.class_slack);
  v.reference_classes = detail::hulls(gaps.classes);
  v.subject_classes = detail::hulls(chain1.classes);

  for (std::size_t k = 0; k < gaps.n(); ++k) {
    IntervalCheck ic{k, gaps.tau(k), gaps.tau(k + 1), {}};
    for (const auto& c : classes_in(chain1, ic.lo, ic.hi, true, false, prm.class_slack)) ic.found.push_back(c.hull);
    v.expected.push_back(1);
    v.observed.push_back(ic.found.size());
    v.details.push_back(std::move(ic));
  }
  if (v.hypothesis_report.is_strict()) {
    v.count_check = CountCheck{"null-classes of phi1 on (t0, t_end)", t0, t_end, gaps.n(),
                               detail::count_in(chain1, t0, t_end, true, prm.class_slack)};
  }
  if (!v.hypothesis_report.is_majorant()) {
    v.vacuous = true;
    v.vacuous_reason = std::string("hypothesis verdict ") + to_string(v.hypothesis_report.verdict);
  } else if (gaps.n() == 0) {
    v.vacuous = true;
    v.vacuous_reason = "phi2 has no null-classes beyond t0";
  }
  detail::finish(v);
  return v;
}

struct CorollaryParams : CompareParams {
  double t_end;
  explicit CorollaryParams(double t_end_) : t_end(t_end_) {}
  CorollaryParams(const CompareParams& base, double t_end_) : CompareParams(base), t_end(t_end_) {}
};

inline TheoremVerdict verify_corollary31(const SystemCoefficients& sys1, const SystemCoefficients& sys2,
                                         const Trajectory& sol1, const Trajectory& sol2, double t0,
                                         const CorollaryParams& prm) {
  TheoremVerdict v;
  const Interval I(t0, prm.t_end);
  const State s1 = sol1.eval(t0), s2 = sol2.eval(t0);
  if (!s1.nontrivial() || !s2.nontrivial()) throw PreconditionError("verify_corollary31: trivial solution");
  v.hypothesis_report = system_majorant(sys1, sys2, I, prm);
  auto c37 = ratio_condition("(initial ratios) psi2/phi2 >= psi1/phi1 at t0", initial_ratio(s1), initial_ratio(s2),
                             prm.strict_tol);
  const bool c37_ok = c37.passed(), c37_strict = ratio_strict(c37, prm.strict_tol);
  v.hypothesis_report.conditions.push_back(c37);

  const auto chain2 = chain_on(sys2, s2, I, prm);
  const auto chain1 = chain_on(sys1, s1, I, prm);
  detail::append_warnings(v, chain1, "phi1");
  detail::append_warnings(v, chain2, "phi2");
  const ClassGaps gaps = class_gaps(chain2, t0, prm.class_slack);
  v.reference_classes = detail::hulls(gaps.classes);
  v.subject_classes = detail::hulls(chain1.classes);
  const std::size_t n = gaps.n();

  if (!v.hypothesis_report.is_majorant() || !c37_ok) {
    v.vacuous = true;
    v.vacuous_reason = "hypotheses fail";
  } else if (n == 0) {
    v.vacuous = true;
    v.vacuous_reason = "phi2 has no null-classes beyond t0";
  }
  if (n > 0) {
    const double t_n = gaps.t(n);
    bool strict = c37_strict;
    if (!strict && t_n > t0) strict = system_majorant(sys1, sys2, Interval(t0, t_n), prm).is_strict();
    if (!v.vacuous && !strict) {
      v.vacuous = true;
      v.vacuous_reason = "neither the initial-ratio inequality nor the majorant is strict";
    }
    v.count_check = CountCheck{"null-classes of phi1 on (t0, t_n)", t0, t_n, n,
                               detail::count_in(chain1, t0, t_n, true, prm.class_slack)};
  }
  detail::finish(v);
  return v;
}

/// Classical comparison for systems: sys2 majorizes sys1 (f2 >= f1 > 0,
/// g2 >= g1), phi1 has n zeros on (t0, t_end]; then phi2 has at least n zeros
/// on (t0, t_n], and at least n on (t0, t_end) under strictness.
inline TheoremVerdict verify_sturm_system(const SystemCoefficients& sys1, const SystemCoefficients& sys2,
                                          const State& init1, const State& init2, const Interval& I,
                                          MajorantReport hypothesis, const CompareParams& prm = {}) {
  TheoremVerdict v;
  v.hypothesis_report = std::move(hypothesis);
  const double t0 = I.lo;
  if (!init1.nontrivial() || !init2.nontrivial()) throw PreconditionError("verify_sturm: trivial solution");
  auto c = ratio_condition("(initial ratios) psi1/phi1 >= psi2/phi2 at t0", initial_ratio(init2),
                           initial_ratio(init1), prm.strict_tol);
  const bool c_ok = c.passed(), c_strict = ratio_strict(c, prm.strict_tol);
  v.hypothesis_report.conditions.push_back(c);

  const auto chain1 = chain_on(sys1, init1, I, prm);
  const auto chain2 = chain_on(sys2, init2, I, prm);
  detail::append_warnings(v, chain1, "phi1");
  detail::append_warnings(v, chain2, "phi2");
  const ClassGaps zeros1 = class_gaps(chain1, t0, prm.class_slack);
  v.reference_classes = detail::hulls(zeros1.classes);
  v.subject_classes = detail::hulls(chain2.classes);
  const std::size_t n = zeros1.n();

  if (!v.hypothesis_report.is_majorant() || !c_ok) {
    v.vacuous = true;
    v.vacuous_reason = "hypotheses fail";
  } else if (n == 0) {
    v.vacuous = true;
    v.vacuous_reason = "phi1 has no zeros on (t0, t_end]";
  }
  if (n > 0) {
    const double t_n = zeros1.t(n);
    IntervalCheck ic{0, t0, t_n, {}};
    for (const auto& cl : classes_in(chain2, t0, t_n, true, false, prm.class_slack)) ic.found.push_back(cl.hull);
    v.expected.push_back(n);
    v.observed.push_back(ic.found.size());
    v.details.push_back(std::move(ic));
    bool strict = c_strict;
    if (!strict) strict = sturm_majorant_system(sys1, sys2, Interval(t0, t_n), prm).is_strict();
    if (strict && v.hypothesis_report.is_majorant())
      v.count_check = CountCheck{"zeros of phi2 on (t0, t_end)", t0, I.hi, n,
                                 detail::count_in(chain2, t0, I.hi, true, prm.class_slack)};
  }
  detail::finish(v);
  return v;
}

/// Classical Sturm comparison for (p_j phi')' + q_j phi = 0, with (p2, q2)
/// majorizing (p1, q1). Initial data are states (phi, p phi') at I.lo.
inline TheoremVerdict verify_sturm_classical(const CoefficientFn& p1, const CoefficientFn& q1, const CoefficientFn& p2,
                                             const CoefficientFn& q2, const State& init1, const State& init2,
                                             const Interval& I, const CompareParams& prm = {}) {
  auto hyp = sturm_majorant_eq(p1, q1, p2, q2, I, prm);
  const auto sys1 = from_sturm_liouville(p1, q1);
  const auto sys2 = from_sturm_liouville(p2, q2);
  return verify_sturm_system(sys1, sys2, init1, init2, I, std::move(hyp), prm);
}

}  // namespace sturmlab
