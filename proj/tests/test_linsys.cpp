#include <gtest/gtest.h>

#include <sstream>

#include "sturmlab/instances.hpp"
#include "support.hpp"

using namespace sturmlab;
using sturmlab::fx::pi;

TEST(Linsys, SineClosedForm) {
  const auto sys = fx::constant_system(Interval(0, 2 * pi), 1, 1);
  const auto tr = integrate_system(sys, {0, 1}, sys.domain());
  double worst = 0;
  for (double t : fx::uniform_grid(sys.domain(), 2001)) {
    const State s = tr.eval(t);
    worst = std::max({worst, std::abs(s.phi - std::sin(t)), std::abs(s.psi - std::cos(t))});
  }
  EXPECT_LE(worst, 1e-8);
  const State q = tr.eval(pi / 2);
  EXPECT_NEAR(q.phi, 1.0, 1e-8);
  EXPECT_NEAR(q.psi, 0.0, 1e-8);
}

TEST(Linsys, DecoupledLinearGrowth) {
  const auto sys = fx::constant_system(Interval(0, 1), 1, 0);
  const auto tr = integrate_system(sys, {1, 1}, sys.domain());
  for (double t : {0.0, 0.25, 0.7, 1.0}) {
    EXPECT_NEAR(tr.phi(t), 1 + t, 1e-12);
    EXPECT_NEAR(tr.psi(t), 1.0, 1e-12);
  }
}

TEST(Linsys, Ex11ContinuumUnderBothSigns) {
  for (double sign : {-1.0, 1.0}) {
    const auto sys = fx::ex11_system(sign);
    const auto tr = integrate_system(sys, {0, 1}, sys.domain());
    for (double t : fx::uniform_grid(Interval(0, pi), 101)) EXPECT_EQ(tr.phi(t), 0.0) << "sign " << sign;
    const State s = tr.eval(pi / 2);
    EXPECT_NEAR(s.phi, 0.0, 1e-8);
    EXPECT_NEAR(s.psi, 1.0, 1e-8);
    const auto z = tr.phi_zero_set(0, 2 * pi);
    ASSERT_FALSE(z.empty());
    EXPECT_EQ(z.front().lo, 0.0);
    EXPECT_NEAR(z.front().hi, pi, 1e-12);
  }
}

TEST(Linsys, InitialStateReproducedExactly) {
  const auto inst = instances::random_system(42);
  const auto tr = integrate_system_from(inst.sys, inst.init, 3.3, inst.sys.domain());
  const State s = tr.eval(3.3);
  EXPECT_EQ(s.phi, inst.init.phi);
  EXPECT_EQ(s.psi, inst.init.psi);
  for (double m : tr.mesh()) EXPECT_NO_THROW(tr.eval(m));
}

TEST(Linsys, OutsideDomainThrows) {
  const auto sys = fx::constant_system(Interval(0, 1), 1, 1);
  const auto tr = integrate_system(sys, {0, 1}, sys.domain());
  EXPECT_THROW(tr.eval(1.01), DomainError);
  EXPECT_THROW(integrate_system(sys, {0, 1}, Interval(0, 2)), DomainError);
}

TEST(Linsys, SturmLiouvilleReduction) {
  const Interval d(1, 2);
  auto sys = from_sturm_liouville(CoefficientFn::constant(d, 1), CoefficientFn::constant(d, 4));
  EXPECT_EQ(sys.f.eval(1.5), 1.0);
  EXPECT_EQ(sys.g.eval(1.5), 4.0);
  sys = from_sturm_liouville(CoefficientFn::constant(d, 2), CoefficientFn::constant(d, 0));
  EXPECT_EQ(sys.f.eval(1.2), 0.5);
  EXPECT_EQ(sys.g.eval(1.2), 0.0);
  sys = from_sturm_liouville(CoefficientFn::polynomial(d, {0, 1}), CoefficientFn::constant(d, 1));
  for (double t : {1.0, 1.3, 2.0}) EXPECT_NEAR(sys.f.eval(t), 1 / t, 1e-15);
  EXPECT_THROW(from_sturm_liouville(CoefficientFn::polynomial(Interval(-1, 1), {0, 1}),
                                    CoefficientFn::constant(Interval(-1, 1), 1)),
               ReductionError);
}

TEST(Linsys, AgreesWithBruteForceRk4) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = instances::random_system(seed);
    const auto tr = integrate_system(inst.sys, inst.init, inst.sys.domain());
    const State ref = fx::rk4(inst.sys, inst.init, 0.0, 10.0);
    const State got = tr.eval(10.0);
    const double scale = std::max(1.0, std::hypot(ref.phi, ref.psi));
    EXPECT_NEAR(got.phi, ref.phi, 1e-7 * scale) << seed;
    EXPECT_NEAR(got.psi, ref.psi, 1e-7 * scale) << seed;
  }
}

TEST(Linsys, TrajectoryCsv) {
  const auto sys = fx::constant_system(Interval(0, 1), 1, 0);
  const auto tr = integrate_system(sys, {1, 1}, sys.domain());
  std::ostringstream a, b;
  write_trajectory_csv(a, tr, 5);
  write_trajectory_csv(b, tr, 5);
  const std::string text = a.str();
  EXPECT_EQ(text, b.str());
  EXPECT_EQ(text.substr(0, 12), "t,phi,psi\n0,");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

// Properties over the random-system generator.

TEST(LinsysProperty, Linearity) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto inst = instances::random_system(seed);
    const auto base = integrate_system(inst.sys, inst.init, inst.sys.domain());
    for (double alpha : {2.0, -1.0, 0.5}) {
      const auto scaled = integrate_system(inst.sys, {alpha * inst.init.phi, alpha * inst.init.psi}, inst.sys.domain());
      for (double t : fx::uniform_grid(inst.sys.domain(), 101)) {
        const State a = base.eval(t), b = scaled.eval(t);
        const double s = std::max(1.0, std::hypot(a.phi, a.psi)) * std::abs(alpha);
        EXPECT_NEAR(b.phi, alpha * a.phi, 10 * 1e-10 * s);
        EXPECT_NEAR(b.psi, alpha * a.psi, 10 * 1e-10 * s);
      }
    }
  }
}

TEST(LinsysProperty, NoCommonZero) {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const auto inst = instances::random_system(seed);
    const auto tr = integrate_system(inst.sys, inst.init, inst.sys.domain());
    double m = std::numeric_limits<double>::infinity();
    for (double t : fx::uniform_grid(inst.sys.domain(), 5001)) {
      const State s = tr.eval(t);
      m = std::min(m, s.phi * s.phi + s.psi * s.psi);
    }
    EXPECT_GT(m, 0.0) << seed;
  }
}

TEST(LinsysProperty, ConstantCoefficientEnergy) {
  for (auto [f, g] : {std::pair{1.0, 1.0}, {0.5, 3.0}, {2.0, 0.25}}) {
    const auto sys = fx::constant_system(Interval(0, 20), f, g);
    const auto tr = integrate_system(sys, {0.3, -0.8}, sys.domain());
    const double e0 = g * 0.09 + f * 0.64;
    for (double t : fx::uniform_grid(sys.domain(), 1001)) {
      const State s = tr.eval(t);
      EXPECT_NEAR(g * s.phi * s.phi + f * s.psi * s.psi, e0, 10 * 1e-10 * e0 * 20);
    }
  }
}

TEST(LinsysProperty, ToleranceScalingOfZeros) {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const auto inst = instances::random_system(seed);
    const auto a = integrate_system(inst.sys, inst.init, inst.sys.domain(), 1e-10);
    const auto b = integrate_system(inst.sys, inst.init, inst.sys.domain(), 5e-11);
    const auto za = a.phi_zero_set(0, 10), zb = b.phi_zero_set(0, 10);
    ASSERT_EQ(za.size(), zb.size()) << seed;
    for (std::size_t i = 0; i < za.size(); ++i) {
      EXPECT_NEAR(za[i].lo, zb[i].lo, 1e-9) << seed;
      EXPECT_NEAR(za[i].hi, zb[i].hi, 1e-9) << seed;
    }
  }
}
