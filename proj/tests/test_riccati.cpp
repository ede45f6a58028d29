#include <gtest/gtest.h>

#include "properties.hpp"

using namespace sturmlab;
using sturmlab::fx::pi;

namespace {

// y' = -f y^2 - g by fixed-step RK4 directly on y; only valid away from poles.
double direct_riccati(const SystemCoefficients& sys, double t0, double y0, double t1, int n = 20000) {
  double y = y0;
  const double h = (t1 - t0) / n;
  auto r = [&](double t, double v) { return -sys.f.eval(t) * v * v - sys.g.eval(t); };
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * h;
    const double k1 = r(t, y), k2 = r(t + h / 2, y + h / 2 * k1), k3 = r(t + h / 2, y + h / 2 * k2),
                 k4 = r(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

}  // namespace

TEST(Riccati, MinusTangent) {
  const auto sys = fx::constant_system(Interval(-3, 10), 1, 1);
  const auto y = solve_riccati(sys, 0, 0, Interval(0, 3));
  for (double t : {0.1, 0.7, 1.2, 1.5, 2.0, 2.9}) EXPECT_NEAR(y.y(t), -std::tan(t), 1e-8 * std::max(1.0, std::tan(t) * std::tan(t)));
  EXPECT_NEAR(y.y(1.5), direct_riccati(sys, 0, 0, 1.5), 1e-7);
}

TEST(Riccati, TrivialAndSeparable) {
  const auto zero = fx::constant_system(Interval(0, 5), 0, 0);
  const auto c = solve_riccati(zero, 0, 2.5, zero.domain());
  for (double t : {0.0, 1.0, 5.0}) EXPECT_EQ(c.y(t), 2.5);
  const auto sep = fx::constant_system(Interval(0, 10), 1, 0);
  const auto y = solve_riccati(sep, 0, 1, sep.domain());
  for (double t : {0.5, 3.0, 10.0}) EXPECT_NEAR(y.y(t), 1 / (1 + t), 1e-10);
  EXPECT_TRUE(poles(y, sep.domain()).empty());
}

TEST(Riccati, PolesOfMinusTangent) {
  const auto sys = fx::constant_system(Interval(-3, 10), 1, 1);
  const auto y = solve_riccati(sys, 0, 0, Interval(0, 3));
  const auto ps = poles(y, Interval(0, 3));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_NEAR(ps[0].lo, pi / 2, 1e-8);
  EXPECT_FALSE(ps[0].continuum);
  const auto lim = probe_pole(y, ps[0]);
  EXPECT_LT(lim.left_min, -1e6);
  EXPECT_GT(lim.right_max, 1e6);
}

TEST(Riccati, PoleSpacingForFrequencyTwo) {
  // phi = cos 2t + (y0/2) sin 2t; poles where tan 2t = -2/y0
  const auto sys = fx::constant_system(Interval(0, 5), 1, 4);
  for (double y0 : {1e6, -1e6}) {
    const auto y = solve_riccati(sys, 0, y0, sys.domain());
    const auto ps = poles(y, sys.domain());
    const double first = std::fmod(std::atan2(-2.0, y0) / 2 + pi, pi / 2);
    ASSERT_GE(ps.size(), 2u);
    EXPECT_NEAR(ps[0].lo, first, 1e-8) << y0;
    for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_NEAR(ps[i].lo - ps[i - 1].lo, pi / 2, 1e-8);
  }
  // a large negative start blows up right after t0
  const auto y = solve_riccati(sys, 0, -1e6, sys.domain());
  EXPECT_NEAR(poles(y, sys.domain()).front().lo, 1e-6, 1e-9);
}

TEST(Riccati, MaxInterval) {
  const auto sys = fx::constant_system(Interval(-3, 10), 1, 1);
  auto y = solve_riccati(sys, 0, 0, Interval(-3, 3));
  auto m = max_interval(y, 0, Interval(-3, 3));
  EXPECT_NEAR(m.t1, -pi / 2, 1e-8);
  EXPECT_NEAR(m.t2, pi / 2, 1e-8);
  EXPECT_TRUE(m.left_is_pole && m.right_is_pole);
  y = solve_riccati(sys, 0, 0, Interval(0, 3));
  m = max_interval(y, 2, Interval(0, 3));
  EXPECT_NEAR(m.t1, pi / 2, 1e-8);
  EXPECT_EQ(m.t2, 3.0);
  EXPECT_FALSE(m.right_is_pole);
  const auto sep = fx::constant_system(Interval(0, 10), 1, 0);
  const auto free = solve_riccati(sep, 0, 1, sep.domain());
  m = max_interval(free, 4, sep.domain());
  EXPECT_EQ(m.t1, 0.0);
  EXPECT_EQ(m.t2, 10.0);
  EXPECT_THROW(max_interval(y, pi / 2, Interval(0, 3)), PreconditionError);
}

TEST(Riccati, ContinuumPoleWhereFVanishes) {
  // on the Ex11 system started with phi = 0 the lift's phi vanishes on [0, pi]
  const auto sys = fx::ex11_system(-1);
  const auto tr = integrate_system(sys, {0, 1}, sys.domain());
  (void)tr;
  const auto y = solve_riccati(sys, 3 * pi / 2, 0.0, sys.domain());
  const auto ps = poles(y, sys.domain());
  for (const auto& p : ps)
    if (p.continuum) EXPECT_TRUE(sys.f.identically_zero_on(p.lo, p.hi));
}

TEST(ComplexPhase, FixedPoint) {
  const auto sys = fx::constant_system(Interval(0, 5), 1, 1);
  const auto z = solve_complex_phase(sys, 0);
  for (double t : {0.0, 2.0, 5.0}) {
    EXPECT_NEAR(z.x(t), 0.0, 1e-12);
    EXPECT_NEAR(z.y(t), 1.0, 1e-12);
  }
}

TEST(ComplexPhase, ZeroF) {
  const auto sys = fx::constant_system(Interval(1, 4), 0, 1);
  const auto z = solve_complex_phase(sys, 1);
  for (double t : {1.0, 2.5, 4.0}) {
    EXPECT_NEAR(z.x(t), -(t - 1), 1e-12);
    EXPECT_NEAR(z.y(t), 1.0, 1e-14);
  }
  EXPECT_THROW(solve_complex_phase(sys, 2.0), PreconditionError);
}

TEST(ComplexPhase, FrequencyTwoAgainstTightTolerance) {
  const auto sys = fx::constant_system(Interval(0, 10), 1, 4);
  const auto z = solve_complex_phase(sys, 0), ref = solve_complex_phase(sys, 0, 1e-13);
  for (double t : fx::uniform_grid(sys.domain(), 200)) {
    EXPECT_NEAR(z.y(t), ref.y(t), 1e-8);
    EXPECT_NEAR(z.x(t), ref.x(t), 1e-8);
  }
  EXPECT_GT(z.min_y(), 0.0);
  // z' = -z^2 - 4 from z(0) = i circles the fixed point 2i through i and 4i
  EXPECT_NEAR(z.min_y(), 1.0, 1e-8);
  double top = 0;
  for (double t : fx::uniform_grid(sys.domain(), 4000)) top = std::max(top, z.y(t));
  EXPECT_NEAR(top, 4.0, 1e-5);
}

TEST(Inequality, EtaFromLambda) {
  auto e = eta_from_lambda(fx::constant_system(Interval(0, 3), 1, 1), 0, 0);
  EXPECT_NEAR(e(2.0), -2.0, 1e-14);
  e = eta_from_lambda(fx::constant_system(Interval(0, 3), 1, 0), 0, 5);
  EXPECT_EQ(e(1.7), 5.0);
  const SystemCoefficients ex(fx::ex11_f(), CoefficientFn::constant(Interval(0, 2 * pi), 1));
  e = eta_from_lambda(ex, pi, 2);
  for (double t : {pi, 4.0, 2 * pi}) EXPECT_NEAR(e(t), 2 - (t - pi), 1e-13);
  const SystemCoefficients bad(CoefficientFn::sinpow(Interval(0, 7), 1, 1, 0, 1), CoefficientFn::constant(Interval(0, 7), 1));
  EXPECT_THROW(eta_from_lambda(bad, 0, 1), PreconditionError);
  EXPECT_NO_THROW(eta_from_lambda(bad, 0, 1, 3.0));
}

TEST(Inequality, CheckExamples) {
  const auto sys = fx::constant_system(Interval(0, 3), 1, 1);
  const auto e = eta_from_lambda(sys, 0, 0.5);
  auto c = check_inequality(e.eta, sys, e.domain, default_residual_grid(e.domain));
  EXPECT_TRUE(c.holds);
  EXPECT_GE(c.worst_residual, -1e-8);

  // an exact solution satisfies the inequality with equality
  c = check_inequality([](double t) { return -std::tan(t); }, sys, Interval(0, 1.4), 600);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.worst_residual, 0.0, 1e-6);
  // the numerical lift of the same solution, away from the blow-up
  const auto y = solve_riccati(sys, 0, 0, Interval(0, 1.0));
  c = check_inequality([&](double t) { return y.y(t); }, sys, Interval(0, 1.0), 600);
  EXPECT_NEAR(c.worst_residual, 0.0, 1e-6);

  const auto neg = fx::constant_system(Interval(0, 1), 1, -1);
  c = check_inequality([](double) { return 0.0; }, neg, Interval(0, 1), 64);
  EXPECT_FALSE(c.holds);
  EXPECT_NEAR(c.worst_residual, -1.0, 1e-12);
}

TEST(Inequality, KnotsUseOneSidedDifferences) {
  // eta_lambda over a g with a kink: the residual stays f eta^2 >= 0 on both sides
  const auto g = CoefficientFn::piecewise_linear({0, 1, 2}, {0, 3, -1});
  const SystemCoefficients sys(CoefficientFn::constant(Interval(0, 2), 0.5), g);
  const auto e = eta_from_lambda(sys, 0, 1);
  const auto c = check_inequality(e.eta, sys, e.domain, default_residual_grid(e.domain));
  EXPECT_TRUE(c.holds) << c.worst_residual << " at " << c.worst_at;
}

TEST(Theorem21, Examples) {
  const Interval I(0, 0.5);
  const auto s4 = fx::constant_system(Interval(0, 1), 1, 4), s1 = fx::constant_system(Interval(0, 1), 1, 1);
  {
    const auto y2 = solve_riccati(s4, 0, 0, I);
    const auto r = theorem21_hypothesis(s4, s4, y2, eta_from_lambda(s4, 0, 1, 0.5), eta_from_lambda(s4, 0, 1, 0.5),
                                        0.0, 0, I);
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.min_margin, 0.0, 1e-10);
  }
  {
    const auto y2 = solve_riccati(s4, 0, 0, I);
    const auto r = theorem21_hypothesis(s1, s4, y2, eta_from_lambda(s1, 0, 1, 0.5), eta_from_lambda(s4, 0, 1, 0.5),
                                        0.0, 0, I);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.min_margin, -1e-12);
    EXPECT_FALSE(r.witness);
  }
  {
    const auto y2 = solve_riccati(s1, 0, 0, I);
    const auto r = theorem21_hypothesis(s4, s1, y2, eta_from_lambda(s4, 0, 1, 0.5), eta_from_lambda(s1, 0, 1, 0.5),
                                        0.0, 0, I);
    EXPECT_FALSE(r.holds);
    EXPECT_LT(r.min_margin, 0.0);
    ASSERT_TRUE(r.witness);
    EXPECT_GT(*r.witness, 0.0);
  }
}

TEST(Theorem21, PreconditionsReportedIndividually) {
  const Interval I(0, 0.5);
  const auto s1 = fx::constant_system(Interval(0, 1), 1, 1);
  const auto y2 = solve_riccati(s1, 0, 0.9, I);
  // eta below y2(t0) and y_init outside its window
  const auto r = theorem21_hypothesis(s1, s1, y2, eta_from_lambda(s1, 0, 0.0, 0.5), eta_from_lambda(s1, 0, 1.0, 0.5),
                                      2.0, 0, I);
  EXPECT_FALSE(r.holds);
  std::size_t failed = 0;
  for (const auto& p : r.preconditions) failed += !p.ok;
  EXPECT_EQ(failed, 2u);
}

// Properties, at reduced counts (the acceptance binary runs the full ones).

TEST(RiccatiProperty, ProjectiveConsistency) {
  std::size_t checked = 0;
  for (std::uint64_t s = 400; checked < 200; ++s) {
    const auto inst = instances::random_system(s);
    instances::Rng rng(s);
    const auto y = solve_riccati(inst.sys, 5.0, instances::uniform(rng, -2, 2), inst.sys.domain());
    for (int i = 0; i < 20; ++i) {
      const double t = instances::uniform(rng, 0.01, 9.99);
      const auto k = inst.sys.knots();
      if (std::any_of(k.begin(), k.end(), [&](double b) { return std::abs(b - t) < 1e-5; })) continue;
      if (std::abs(y.lift.phi(t)) < 0.2 * std::hypot(y.lift.phi(t), y.lift.psi(t))) continue;
      const double h = 1e-6, v = y.y(t);
      const double d = (y.y(t + h) - y.y(t - h)) / (2 * h);
      EXPECT_LE(std::abs(d + inst.sys.f.eval(t) * v * v + inst.sys.g.eval(t)), 1e-5 * std::max(1.0, v * v))
          << "seed " << s << " t " << t;
      ++checked;
    }
  }
}

TEST(RiccatiProperty, Lemma23) {
  const auto t = fx::lemma23(30);
  EXPECT_TRUE(t.ok()) << t.summary();
}

TEST(RiccatiProperty, Lemma22) {
  const auto t = fx::lemma22(20);
  EXPECT_TRUE(t.ok()) << t.summary();
}

TEST(RiccatiProperty, Lemma21) {
  const auto t = fx::lemma21(20);
  EXPECT_TRUE(t.ok()) << t.summary();
  EXPECT_GT(t.checks, 0u);
}

TEST(RiccatiProperty, Theorem21Conclusion) {
  const auto t = fx::theorem21_conclusion(25);
  EXPECT_TRUE(t.ok()) << t.summary();
  EXPECT_EQ(t.instances, 25u);
}

TEST(RiccatiProperty, ImaginaryPartPositive) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = instances::random_system(s);
    const auto z = solve_complex_phase(inst.sys, 0);
    EXPECT_GT(z.min_y(), 0.0);
    for (double t : fx::uniform_grid(inst.sys.domain(), 2000)) ASSERT_GT(z.y(t), 0.0);
  }
}
