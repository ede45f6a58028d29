#pragma once

// Piecewise closed-form coefficient functions on a closed interval.
//
// A CoefficientFn is a tiling of its domain by pieces, each one of a small set
// of closed-form families. The restriction buys exact evaluation, closed-form
// integrals and exact per-piece range/sign analysis, which the comparison
// checkers rely on for hypotheses such as "f >= 0 on [t0, t1]".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sturmlab/errors.hpp"
#include "sturmlab/poly.hpp"

namespace sturmlab {

struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      std::ostringstream os;
      os << "invalid interval [" << lo << ", " << hi << "]";
      throw DomainError(os.str());
    }
  }

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

using ScalarFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Piece families

struct ConstantPiece {
  double value;
};

/// Polynomial in global t, ascending coefficients.
struct PolyPiece {
  std::vector<double> coeffs;
};

/// amplitude * sin(frequency * t + phase)^power
struct SinPowPiece {
  double amplitude;
  double frequency;
  double phase;
  int power;
};

using BasicPieceSpec = std::variant<ConstantPiece, PolyPiece, SinPowPiece>;

/// 1 / inner(t). Produced by the Sturm-Liouville reduction f = 1/p.
struct ReciprocalPiece {
  BasicPieceSpec inner;
};

using PieceSpec = std::variant<ConstantPiece, PolyPiece, SinPowPiece, ReciprocalPiece>;

struct Piece {
  double from;
  double to;
  PieceSpec spec;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

inline double eval_basic(const BasicPieceSpec& s, double t) {
  return std::visit(overloaded{
                        [](const ConstantPiece& p) { return p.value; },
                        [t](const PolyPiece& p) { return poly::eval(p.coeffs, t); },
                        [t](const SinPowPiece& p) {
                          return p.amplitude * ipow(std::sin(p.frequency * t + p.phase), p.power);
                        },
                    },
                    s);
}

inline double eval_spec(const PieceSpec& s, double t) {
  return std::visit(overloaded{
                        [t](const ReciprocalPiece& p) { return 1.0 / eval_basic(p.inner, t); },
                        [t](const auto& p) { return eval_basic(BasicPieceSpec{p}, t); },
                    },
                    s);
}

// Antiderivative of sin(u)^n in u.
inline double sin_power_antiderivative(double u, int n) {
  if (n == 0) return u;
  if (n == 1) return -std::cos(u);
  const double s = std::sin(u);
  return -ipow(s, n - 1) * std::cos(u) / n + static_cast<double>(n - 1) / n * sin_power_antiderivative(u, n - 2);
}

// Range of sin over [u0, u1], u0 <= u1.
inline std::pair<double, double> sin_range(double u0, double u1) {
  constexpr double pi = std::numbers::pi;
  double lo = std::min(std::sin(u0), std::sin(u1));
  double hi = std::max(std::sin(u0), std::sin(u1));
  if (std::ceil((u0 - pi / 2) / (2 * pi)) <= std::floor((u1 - pi / 2) / (2 * pi))) hi = 1.0;
  if (std::ceil((u0 + pi / 2) / (2 * pi)) <= std::floor((u1 + pi / 2) / (2 * pi))) lo = -1.0;
  return {lo, hi};
}

inline std::pair<double, double> range_basic(const BasicPieceSpec& s, double a, double b) {
  return std::visit(
      overloaded{
          [](const ConstantPiece& p) { return std::pair{p.value, p.value}; },
          [a, b](const PolyPiece& p) {
            const auto e = poly::extrema(p.coeffs, a, b);
            return std::pair{e.min, e.max};
          },
          [a, b](const SinPowPiece& p) {
            double u0 = p.frequency * a + p.phase, u1 = p.frequency * b + p.phase;
            if (u0 > u1) std::swap(u0, u1);
            auto [smin, smax] = sin_range(u0, u1);
            double lo, hi;
            if (p.power % 2 == 1) {
              lo = ipow(smin, p.power);
              hi = ipow(smax, p.power);
            } else {
              const double e0 = ipow(smin, p.power), e1 = ipow(smax, p.power);
              hi = std::max(e0, e1);
              lo = (smin <= 0.0 && smax >= 0.0) ? 0.0 : std::min(e0, e1);
            }
            if (p.amplitude >= 0) return std::pair{p.amplitude * lo, p.amplitude * hi};
            return std::pair{p.amplitude * hi, p.amplitude * lo};
          },
      },
      s);
}

// Leftmost zero of a basic piece on [a, b], if any.
inline std::optional<double> first_zero_basic(const BasicPieceSpec& s, double a, double b) {
  return std::visit(overloaded{
                        [a](const ConstantPiece& p) -> std::optional<double> {
                          if (p.value == 0.0) return a;
                          return std::nullopt;
                        },
                        [a, b](const PolyPiece& p) -> std::optional<double> {
                          if (poly::is_zero(p.coeffs)) return a;
                          auto r = poly::roots_in(p.coeffs, a, b);
                          if (r.empty()) return std::nullopt;
                          return r.front();
                        },
                        [a, b](const SinPowPiece& p) -> std::optional<double> {
                          constexpr double pi = std::numbers::pi;
                          if (p.amplitude == 0.0) return a;
                          if (p.power == 0) return std::nullopt;
                          if (p.frequency == 0.0) {
                            if (std::sin(p.phase) == 0.0) return a;
                            return std::nullopt;
                          }
                          double u0 = p.frequency * a + p.phase, u1 = p.frequency * b + p.phase;
                          double best = std::numeric_limits<double>::infinity();
                          const double lo = std::min(u0, u1), hi = std::max(u0, u1);
                          for (double m = std::ceil(lo / pi); m * pi <= hi; m += 1.0) {
                            const double t = (m * pi - p.phase) / p.frequency;
                            best = std::min(best, std::clamp(t, a, b));
                          }
                          if (std::isfinite(best)) return best;
                          return std::nullopt;
                        },
                    },
                    s);
}

inline bool is_zero_spec(const PieceSpec& s) {
  return std::visit(overloaded{
                        [](const ConstantPiece& p) { return p.value == 0.0; },
                        [](const PolyPiece& p) { return poly::is_zero(p.coeffs); },
                        [](const SinPowPiece& p) { return p.amplitude == 0.0; },
                        [](const ReciprocalPiece&) { return false; },
                    },
                    s);
}

inline BasicPieceSpec negate_basic(const BasicPieceSpec& s) {
  return std::visit(overloaded{
                        [](const ConstantPiece& p) -> BasicPieceSpec { return ConstantPiece{-p.value}; },
                        [](const PolyPiece& p) -> BasicPieceSpec {
                          PolyPiece q = p;
                          for (double& c : q.coeffs) c = -c;
                          return q;
                        },
                        [](const SinPowPiece& p) -> BasicPieceSpec {
                          SinPowPiece q = p;
                          q.amplitude = -q.amplitude;
                          return q;
                        },
                    },
                    s);
}

inline BasicPieceSpec to_basic(const PieceSpec& s) {
  return std::visit(overloaded{
                        [](const ReciprocalPiece&) -> BasicPieceSpec {
                          throw std::logic_error("reciprocal piece is not basic");
                        },
                        [](const auto& p) -> BasicPieceSpec { return p; },
                    },
                    s);
}

inline PieceSpec from_basic(const BasicPieceSpec& s) {
  return std::visit([](const auto& p) -> PieceSpec { return p; }, s);
}

inline std::string kind_name(const PieceSpec& s) {
  return std::visit(overloaded{
                        [](const ConstantPiece&) { return std::string("constant"); },
                        [](const PolyPiece&) { return std::string("poly"); },
                        [](const SinPowPiece&) { return std::string("sinpow"); },
                        [](const ReciprocalPiece&) { return std::string("reciprocal"); },
                    },
                    s);
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct CompareReport {
  bool ge_everywhere = true;
  std::optional<double> gt_witness;   // first t with c1(t) - c2(t) > tol
  std::optional<double> violated_at;  // t of the most negative margin, when < -tol
  double min_margin = std::numeric_limits<double>::infinity();
  double min_at = 0.0;
  double max_margin = -std::numeric_limits<double>::infinity();
  double max_at = 0.0;
  std::size_t points = 0;
};

class CoefficientFn {
 public:
  static constexpr double kContinuityTol = 1e-12;

  explicit CoefficientFn(std::vector<Piece> pieces) : pieces_(std::move(pieces)) { validate(); }

  static CoefficientFn constant(Interval d, double c) { return CoefficientFn({{d.lo, d.hi, ConstantPiece{c}}}); }
  static CoefficientFn polynomial(Interval d, std::vector<double> coeffs) {
    return CoefficientFn({{d.lo, d.hi, PolyPiece{std::move(coeffs)}}});
  }
  static CoefficientFn sinpow(Interval d, double amplitude, double frequency, double phase, int power) {
    return CoefficientFn({{d.lo, d.hi, SinPowPiece{amplitude, frequency, phase, power}}});
  }
  /// Continuous piecewise-linear interpolant through (knots[i], values[i]).
  static CoefficientFn piecewise_linear(const std::vector<double>& knots, const std::vector<double>& values) {
    if (knots.size() < 2 || knots.size() != values.size())
      throw InvalidCoefficient("piecewise_linear needs matching knot/value lists of size >= 2");
    std::vector<Piece> ps;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double t0 = knots[i], t1 = knots[i + 1];
      const double slope = (values[i + 1] - values[i]) / (t1 - t0);
      if (values[i] == values[i + 1])
        ps.push_back({t0, t1, ConstantPiece{values[i]}});
      else
        ps.push_back({t0, t1, PolyPiece{{values[i] - slope * t0, slope}}});
    }
    return CoefficientFn(std::move(ps));
  }

  Interval domain() const { return {pieces_.front().from, pieces_.back().to}; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Piece boundaries including both domain ends.
  std::vector<double> knots() const {
    std::vector<double> k;
    for (const auto& p : pieces_) k.push_back(p.from);
    k.push_back(pieces_.back().to);
    return k;
  }

  std::vector<double> knots_in(double lo, double hi) const {
    std::vector<double> k;
    for (double b : knots())
      if (b >= lo && b <= hi) k.push_back(b);
    return k;
  }

  std::size_t piece_index(double t) const {
    const double tt = clamp_to_domain(t);
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), tt,
                               [](double v, const Piece& p) { return v < p.from; });
    std::size_t i = static_cast<std::size_t>(std::distance(pieces_.begin(), it));
    return i == 0 ? 0 : i - 1;
  }

  double eval(double t) const {
    const double tt = clamp_to_domain(t);
    return detail::eval_spec(pieces_[piece_index(tt)].spec, tt);
  }
  double operator()(double t) const { return eval(t); }

  /// Evaluates the piece containing `ref` at t. Used by integrators whose
  /// stages may sit exactly on a breakpoint: one-sided evaluation keeps a piece
  /// that is identically zero exactly zero up to and including its endpoints.
  double eval_near(double t, double ref) const {
    return detail::eval_spec(pieces_[piece_index(ref)].spec, clamp_to_domain(t));
  }

  /// Signed integral from t1 to t2. Closed form for every piece family except
  /// reciprocals, which use adaptive Gauss-Kronrod with absolute error ~ tol.
  double integrate(double t1, double t2, double tol = 1e-12) const {
    check_in_domain(t1);
    check_in_domain(t2);
    if (t1 == t2) return 0.0;
    if (t1 > t2) return -integrate(t2, t1, tol);
    double total = 0.0;
    for (const auto& p : pieces_) {
      const double a = std::max(p.from, t1), b = std::min(p.to, t2);
      if (a < b) total += integrate_piece(p.spec, a, b, tol);
    }
    return total;
  }

  /// Exact [min, max] over [lo, hi] from per-piece analysis.
  std::pair<double, double> range(double lo, double hi) const {
    check_in_domain(lo);
    check_in_domain(hi);
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (const auto& p : pieces_) {
      const double a = std::max(p.from, lo), b = std::min(p.to, hi);
      if (a > b) continue;
      auto [pl, ph] = range_piece(p.spec, a, b);
      mn = std::min(mn, pl);
      mx = std::max(mx, ph);
    }
    return {mn, mx};
  }
  std::pair<double, double> range(const Interval& I) const { return range(I.lo, I.hi); }

  /// Sign tests on exact ranges, with a few ulps of slack relative to the
  /// magnitude on I: a linear piece in global t that reaches zero at a knot
  /// evaluates to about -1e-16 there.
  bool nonnegative_on(const Interval& I) const {
    const auto [lo, hi] = range(I);
    return lo >= -sign_slack(lo, hi);
  }
  bool positive_on(const Interval& I) const {
    const auto [lo, hi] = range(I);
    return lo > sign_slack(lo, hi);
  }
  static double sign_slack(double lo, double hi) {
    return 8.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(lo), std::abs(hi)});
  }

  /// True when every piece meeting (lo, hi) is the zero function.
  bool identically_zero_on(double lo, double hi) const {
    for (const auto& p : pieces_) {
      const bool meets = (lo == hi) ? (p.from <= lo && lo <= p.to) : (p.from < hi && p.to > lo);
      if (meets && !detail::is_zero_spec(p.spec)) return false;
    }
    return true;
  }

  /// The same function on a sub-interval of the domain.
  CoefficientFn restricted(const Interval& I) const {
    if (!domain().contains(I)) throw DomainError("restricted: interval outside coefficient domain");
    std::vector<Piece> ps;
    for (const auto& p : pieces_) {
      const double lo = std::max(p.from, I.lo), hi = std::min(p.to, I.hi);
      if (lo < hi) ps.push_back({lo, hi, p.spec});
    }
    return CoefficientFn(std::move(ps));
  }

  CoefficientFn negated() const {
    std::vector<Piece> ps;
    for (const auto& p : pieces_) {
      PieceSpec s = std::visit(detail::overloaded{
                                   [](const ReciprocalPiece& r) -> PieceSpec {
                                     return ReciprocalPiece{detail::negate_basic(r.inner)};
                                   },
                                   [](const auto& q) -> PieceSpec {
                                     return detail::from_basic(detail::negate_basic(q));
                                   },
                               },
                               p.spec);
      ps.push_back({p.from, p.to, std::move(s)});
    }
    return CoefficientFn(std::move(ps));
  }

  /// 1/c as reciprocal pieces (constants are inverted directly).
  CoefficientFn reciprocal() const {
    std::vector<Piece> ps;
    for (const auto& p : pieces_) {
      if (auto z = zero_of_piece(p)) throw ReductionError("reciprocal of a vanishing coefficient", *z);
      PieceSpec s = std::visit(detail::overloaded{
                                   [](const ReciprocalPiece& r) -> PieceSpec { return detail::from_basic(r.inner); },
                                   [](const ConstantPiece& c) -> PieceSpec { return ConstantPiece{1.0 / c.value}; },
                                   [](const auto& q) -> PieceSpec { return ReciprocalPiece{q}; },
                               },
                               p.spec);
      ps.push_back({p.from, p.to, std::move(s)});
    }
    return CoefficientFn(std::move(ps));
  }

 private:
  std::vector<Piece> pieces_;

  double slack() const {
    const auto& a = pieces_.front();
    const auto& b = pieces_.back();
    return 1e-13 * std::max({1.0, std::abs(a.from), std::abs(b.to)});
  }

  void check_in_domain(double t) const {
    const double lo = pieces_.front().from, hi = pieces_.back().to;
    if (!(t >= lo - slack() && t <= hi + slack())) {
      std::ostringstream os;
      os << "t=" << t << " outside coefficient domain [" << lo << ", " << hi << "]";
      throw DomainError(os.str());
    }
  }

  double clamp_to_domain(double t) const {
    check_in_domain(t);
    return std::clamp(t, pieces_.front().from, pieces_.back().to);
  }

  static std::string describe(std::size_t i, const Piece& p) {
    std::ostringstream os;
    os << "piece " << i << " (" << detail::kind_name(p.spec) << " on [" << p.from << ", " << p.to << "])";
    return os.str();
  }

  void validate() {
    if (pieces_.empty()) throw InvalidCoefficient("coefficient needs at least one piece");
    std::vector<std::size_t> order(pieces_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pieces_[a].from < pieces_[b].from; });
    std::vector<Piece> sorted;
    for (std::size_t i : order) sorted.push_back(pieces_[i]);

    for (std::size_t j = 0; j < sorted.size(); ++j) {
      const auto& p = sorted[j];
      if (!std::isfinite(p.from) || !std::isfinite(p.to) || !(p.from < p.to))
        throw InvalidCoefficient(describe(order[j], p) + " has an empty or non-finite span");
      if (const auto* sp = std::get_if<SinPowPiece>(&p.spec); sp && sp->power < 0)
        throw InvalidCoefficient(describe(order[j], p) + " has a negative power");
      if (j == 0) continue;
      const auto& q = sorted[j - 1];
      if (p.from < q.to)
        throw InvalidCoefficient(describe(order[j - 1], q) + " and " + describe(order[j], p) + " overlap");
      if (p.from > q.to)
        throw InvalidCoefficient("gap between " + describe(order[j - 1], q) + " and " + describe(order[j], p));
      const double l = detail::eval_spec(q.spec, q.to), r = detail::eval_spec(p.spec, p.from);
      if (!(std::abs(l - r) <= kContinuityTol * std::max({1.0, std::abs(l), std::abs(r)}))) {
        std::ostringstream os;
        os << "discontinuity at t=" << p.from << " between " << describe(order[j - 1], q) << " and "
           << describe(order[j], p) << ": " << l << " vs " << r;
        throw InvalidCoefficient(os.str());
      }
    }
    pieces_ = std::move(sorted);
  }

  static double integrate_piece(const PieceSpec& s, double a, double b, double tol) {
    return std::visit(
        detail::overloaded{
            [a, b](const ConstantPiece& p) { return p.value * (b - a); },
            [a, b](const PolyPiece& p) {
              const auto A = poly::antiderivative(p.coeffs);
              return poly::eval(A, b) - poly::eval(A, a);
            },
            [a, b](const SinPowPiece& p) {
              if (p.frequency == 0.0) return p.amplitude * detail::ipow(std::sin(p.phase), p.power) * (b - a);
              const double ua = p.frequency * a + p.phase, ub = p.frequency * b + p.phase;
              return p.amplitude / p.frequency *
                     (detail::sin_power_antiderivative(ub, p.power) - detail::sin_power_antiderivative(ua, p.power));
            },
            [a, b, tol](const ReciprocalPiece& p) {
              auto f = [&](double t) { return 1.0 / detail::eval_basic(p.inner, t); };
              double err = 0.0;
              const double rel = std::max(1e-15, tol / std::max(1.0, b - a));
              return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 25, rel, &err);
            },
        },
        s);
  }

  static std::pair<double, double> range_piece(const PieceSpec& s, double a, double b) {
    return std::visit(detail::overloaded{
                          [a, b](const ReciprocalPiece& p) {
                            auto [lo, hi] = detail::range_basic(p.inner, a, b);
                            if (lo <= 0.0 && hi >= 0.0) {
                              const double inf = std::numeric_limits<double>::infinity();
                              return std::pair{-inf, inf};
                            }
                            return std::pair{1.0 / hi, 1.0 / lo};
                          },
                          [a, b](const auto& p) { return detail::range_basic(BasicPieceSpec{p}, a, b); },
                      },
                      s);
  }

  static std::optional<double> zero_of_piece(const Piece& p) {
    if (const auto* r = std::get_if<ReciprocalPiece>(&p.spec)) {
      (void)r;
      return std::nullopt;
    }
    return detail::first_zero_basic(detail::to_basic(p.spec), p.from, p.to);
  }
};

/// Primitive A(t) = integral of c from t0 to t; A(t0) = 0.
class RunningIntegral {
 public:
  RunningIntegral(CoefficientFn c, double t0, double tol = 1e-12) : c_(std::move(c)), tol_(tol) {
    const auto k = c_.knots();
    cum_.resize(k.size());
    cum_[0] = 0.0;
    for (std::size_t i = 1; i < k.size(); ++i) cum_[i] = cum_[i - 1] + c_.integrate(k[i - 1], k[i], tol_);
    offset_ = primitive(t0);
  }

  double operator()(double t) const { return primitive(t) - offset_; }

 private:
  CoefficientFn c_;
  double tol_;
  std::vector<double> cum_;
  double offset_ = 0.0;

  double primitive(double t) const {
    const std::size_t i = c_.piece_index(t);
    const double from = c_.pieces()[i].from;
    return cum_[i] + c_.integrate(from, std::clamp(t, from, c_.pieces()[i].to), tol_);
  }
};

inline RunningIntegral running_integral(const CoefficientFn& c, double t0) {
  if (!c.domain().contains(t0)) throw DomainError("running_integral: t0 outside domain");
  return RunningIntegral(c, t0);
}

/// Grid comparison of c1 against c2 on I: at least `grid` uniform points, every
/// piece breakpoint of either function, and a golden-section refinement around
/// each sampled local minimum of c1 - c2. A reported violation is definitive;
/// ge_everywhere is certified only on the points examined.
inline CompareReport pointwise_compare(const CoefficientFn& c1, const CoefficientFn& c2, const Interval& I,
                                       std::size_t grid, double tol = 0.0) {
  if (!c1.domain().contains(I) || !c2.domain().contains(I))
    throw DomainError("pointwise_compare: interval outside shared domain");
  const std::size_t n = std::max<std::size_t>(grid, 2);
  std::vector<double> ts;
  ts.reserve(n + 16);
  for (std::size_t i = 0; i < n; ++i) ts.push_back(I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n - 1));
  ts.back() = I.hi;
  for (double b : c1.knots_in(I.lo, I.hi)) ts.push_back(b);
  for (double b : c2.knots_in(I.lo, I.hi)) ts.push_back(b);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  auto diff = [&](double t) { return c1.eval(t) - c2.eval(t); };
  std::vector<double> ds(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ds[i] = diff(ts[i]);

  // Golden-section refinement inside cells around local minima.
  const std::size_t sampled = ts.size();
  for (std::size_t i = 1; i + 1 < sampled; ++i) {
    if (!(ds[i] <= ds[i - 1] && ds[i] <= ds[i + 1])) continue;
    if (ds[i] == ds[i - 1] && ds[i] == ds[i + 1]) continue;  // flat
    double a = ts[i - 1], b = ts[i + 1];
    constexpr double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = diff(x1), f2 = diff(x2);
    for (int it = 0; it < 60 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = diff(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = diff(x2);
      }
    }
    const double xm = f1 < f2 ? x1 : x2;
    ts.push_back(xm);
    ds.push_back(std::min(f1, f2));
  }

  // Order the refined points back into t-order for witness selection.
  std::vector<std::size_t> idx(ts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });

  CompareReport r;
  r.points = ts.size();
  for (std::size_t j : idx) {
    const double t = ts[j], d = ds[j];
    if (d < r.min_margin) {
      r.min_margin = d;
      r.min_at = t;
    }
    if (d > r.max_margin) {
      r.max_margin = d;
      r.max_at = t;
    }
    if (d > tol && !r.gt_witness) r.gt_witness = t;
  }
  if (r.min_margin < -tol) {
    r.ge_everywhere = false;
    r.violated_at = r.min_at;
  }
  return r;
}

// ---------------------------------------------------------------------------

/// Coefficients of phi' = f psi, psi' = -g phi.
struct SystemCoefficients {
  CoefficientFn f;
  CoefficientFn g;

  SystemCoefficients(CoefficientFn f_, CoefficientFn g_) : f(std::move(f_)), g(std::move(g_)) {
    if (!(f.domain() == g.domain())) throw InvalidCoefficient("f and g must share a domain");
  }

  Interval domain() const { return f.domain(); }

  SystemCoefficients restricted(const Interval& I) const { return {f.restricted(I), g.restricted(I)}; }

  /// Union of both coefficient knot sets, ascending.
  std::vector<double> knots() const {
    auto k = f.knots();
    auto kg = g.knots();
    k.insert(k.end(), kg.begin(), kg.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
  }
};

}  // namespace sturmlab
