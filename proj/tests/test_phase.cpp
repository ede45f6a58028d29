#include <gtest/gtest.h>

#include "properties.hpp"

using namespace sturmlab;
using sturmlab::fx::pi;

namespace {

PhaseDecomposition sine_decomposition(double hi = 3.5 * pi) {
  return decompose(fx::constant_system(Interval(0, hi), 1, 1), {0, 1});
}

}  // namespace

TEST(Phase, SineDecomposition) {
  const auto d = sine_decomposition();
  EXPECT_NEAR(d.mu, 1.0, 1e-15);
  EXPECT_EQ(d.theta, 0.0);
  for (double t : {0.0, 1.0, pi, 7.0}) EXPECT_NEAR(d.Phi(t), t, 1e-9);
  EXPECT_NEAR(reconstruct_phi(d, pi / 2), 1.0, 1e-8);
}

TEST(Phase, Ex11Reconstruction) {
  for (double sign : {-1.0, 1.0}) {
    const auto sys = fx::ex11_system(sign);
    const auto d = decompose(sys, {0, 1});
    EXPECT_NEAR(reconstruct_phi(d, pi / 2), 0.0, 1e-8);
    const auto tr = integrate_system(sys, {0, 1}, sys.domain());
    for (double t : fx::uniform_grid(sys.domain(), 400)) EXPECT_NEAR(reconstruct_phi(d, t), tr.phi(t), 1e-7);
  }
}

TEST(Phase, ThetaAndMuFromInitialState) {
  const auto sys = fx::constant_system(Interval(0, 1), 1, 1);
  const auto d = decompose(sys, {-3, -4});
  EXPECT_NEAR(d.mu, 5.0, 1e-15);
  EXPECT_NEAR(d.theta, std::atan2(-3.0, -4.0), 1e-15);
  EXPECT_GT(d.theta, -pi);
  EXPECT_LE(d.theta, pi);
  EXPECT_THROW(decompose(sys, {0, 0}), PreconditionError);
}

TEST(NullElements, SineCrossings) {
  const auto d = sine_decomposition();
  const auto els = null_elements(d, Interval(0, 3.5 * pi));
  ASSERT_EQ(els.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_TRUE(els[k].span.is_point());
    EXPECT_EQ(els[k].level, static_cast<long>(k));
    EXPECT_NEAR(els[k].span.lo, k * pi, 1e-8);
    EXPECT_EQ(els[k].kind, ElementKind::Point);
  }
}

TEST(NullElements, Ex11ContinuumFirst) {
  for (double sign : {-1.0, 1.0}) {
    const auto d = decompose(fx::ex11_system(sign), {0, 1});
    const auto els = null_elements(d, Interval(0, 2 * pi));
    ASSERT_FALSE(els.empty());
    EXPECT_EQ(els[0].level, 0);
    EXPECT_EQ(els[0].kind, ElementKind::Continuum);
    EXPECT_LE(fx::hausdorff(els[0].span, {0, pi}), 1e-6);
  }
}

TEST(NullElements, TouchingZero) {
  // f = sin t, g = 0, psi = 1: phi = 1 - cos t + c touches zero at 2pi when c = 0
  const Interval D(0.5, 7.0);
  const SystemCoefficients sys(CoefficientFn::sinpow(D, 1, 1, 0, 1), CoefficientFn::constant(D, 0));
  {
    // at c = 0 rounding may turn the touch into a close pair of crossings;
    // either way it is a single class
    const auto d = decompose(sys, {1 - std::cos(0.5), 1});
    const auto els = null_elements(d, D, 1e-6);
    ASSERT_GE(els.size(), 1u);
    for (const auto& e : els) EXPECT_NEAR(e.span.lo, 2 * pi, 1e-4);
    EXPECT_EQ(null_classes(d, D, 1e-6).classes.size(), 1u);
  }
  {
    // lifted by 5e-8 (inside eps, outside integration error) there is no crossing
    const auto d = decompose(sys, {1 - std::cos(0.5) + 5e-8, 1});
    const auto els = null_elements(d, D, 1e-6);
    ASSERT_EQ(els.size(), 1u);
    EXPECT_EQ(els[0].kind, ElementKind::Tangency);
    EXPECT_NEAR(els[0].span.lo, 2 * pi, 1e-4);
    EXPECT_TRUE(null_elements(d, D, 1e-9).empty());
  }
}

TEST(Congeniality, ExactPiApartIsNot) {
  const auto d = sine_decomposition();
  const auto els = null_elements(d, Interval(0, 3.5 * pi));
  EXPECT_EQ(congeniality(d, els[1], els[2]), Congeniality::NotCongenerous);
  EXPECT_EQ(congeniality(d, els[0], els[0]), Congeniality::Congenerous);
}

TEST(Congeniality, PlateauJoinsTwoZeros) {
  const auto d = decompose(fx::plateau_system(), {0, 1});
  const auto els = null_elements(d, Interval(0, 3 * pi));
  ASSERT_EQ(els.size(), 2u);
  EXPECT_EQ(els[0].level, els[1].level);
  EXPECT_NEAR(els[1].span.lo, 2.5 * pi, 1e-8);
  EXPECT_EQ(congeniality(d, els[0], els[1]), Congeniality::Congenerous);
  EXPECT_EQ(congeniality(d, els[1], els[0]), Congeniality::Congenerous);
}

TEST(NullClasses, SineChainOnHalfOpenInterval) {
  const auto d = sine_decomposition();
  const auto chain = null_classes(d, Interval(0, 3.5 * pi));
  const auto in = classes_in(chain, 0, 3.5 * pi, true, false);
  ASSERT_EQ(in.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(in[k].elements.size(), 1u);
    EXPECT_NEAR(in[k].hull.lo, (k + 1) * pi, 1e-8);
    EXPECT_EQ(in[k].hull.lo, in[k].hull.hi);
  }
  // closed at 0 the start zero is its own class
  EXPECT_EQ(chain.classes.size(), 4u);
  EXPECT_TRUE(chain.warnings.empty());
}

TEST(NullClasses, Ex11SingleContinuumClass) {
  const auto d = decompose(fx::ex11_system(-1), {0, 1});
  const auto chain = null_classes(d, Interval(0, 2 * pi));
  ASSERT_EQ(chain.classes.size(), 1u);
  EXPECT_EQ(chain.classes[0].elements.size(), 1u);
  EXPECT_NEAR(chain.classes[0].hull.hi, pi, 1e-9);
}

TEST(NullClasses, PlateauClassHasTwoElements) {
  const auto d = decompose(fx::plateau_system(), {0, 1});
  const auto chain = null_classes(d, Interval(0, 3 * pi));
  ASSERT_EQ(chain.classes.size(), 1u);
  EXPECT_EQ(chain.classes[0].elements.size(), 2u);
  EXPECT_NEAR(chain.classes[0].hull.hi, 2.5 * pi, 1e-8);
}

TEST(NullClasses, StrictOrdering) {
  const auto d = sine_decomposition();
  const auto chain = null_classes(d, Interval(0, 3.5 * pi));
  for (std::size_t i = 1; i < chain.classes.size(); ++i) EXPECT_TRUE(precedes(chain.classes[i - 1], chain.classes[i]));
  EXPECT_FALSE(precedes(chain.classes[1], chain.classes[0]));
  EXPECT_TRUE(precedes(Span{0, 1}, Span{1.5, 2}));
  EXPECT_FALSE(precedes(Span{0, 1}, Span{1, 2}));  // shared endpoint
}

// Properties.

TEST(PhaseProperty, Reconstruction) {
  const auto t = fx::reconstruction(15);
  EXPECT_TRUE(t.ok()) << t.summary();
}

TEST(PhaseProperty, ZeroSetAgreesWithSignScan) {
  const auto t = fx::zero_set_equivalence(15);
  EXPECT_TRUE(t.ok()) << t.summary();
}

TEST(PhaseProperty, CongenialityIsAnEquivalenceWithinClasses) {
  for (std::uint64_t s = 20; s < 45; ++s) {
    const auto inst = instances::random_system(s);
    const auto d = decompose(inst.sys, inst.init);
    const auto els = null_elements(d, inst.sys.domain());
    const auto chain = null_classes(d, inst.sys.domain());
    // reflexive and symmetric everywhere
    for (std::size_t i = 0; i < els.size(); ++i) {
      EXPECT_EQ(congeniality(d, els[i], els[i]), Congeniality::Congenerous);
      for (std::size_t j = i + 1; j < els.size(); ++j) EXPECT_EQ(congeniality(d, els[i], els[j]), congeniality(d, els[j], els[i]));
    }
    // members pairwise congenerous; neighbours across a class boundary not
    for (const auto& c : chain.classes)
      for (std::size_t i = 0; i < c.elements.size(); ++i)
        for (std::size_t j = i + 1; j < c.elements.size(); ++j)
          EXPECT_EQ(congeniality(d, c.elements[i], c.elements[j]), Congeniality::Congenerous) << "seed " << s;
    for (std::size_t i = 1; i < chain.classes.size(); ++i)
      EXPECT_NE(congeniality(d, chain.classes[i - 1].elements.back(), chain.classes[i].elements.front()),
                Congeniality::Congenerous);
    std::size_t total = 0;
    for (const auto& c : chain.classes) total += c.elements.size();
    EXPECT_EQ(total, els.size());
  }
}

TEST(PhaseProperty, FinitelyManyClasses) {
  // consecutive classes differ by a level, and Phi moves at most int f y,
  // so the class count is bounded by (max Phi - min Phi)/pi + 1
  for (std::uint64_t s = 50; s < 70; ++s) {
    const auto inst = instances::random_system(s);
    const auto d = decompose(inst.sys, inst.init);
    const auto chain = null_classes(d, inst.sys.domain());
    const auto [lo, hi] = phase_range(d, 0, 10);
    double var = 0;  // total variation of Phi bounds the number of level changes
    const auto g = fx::uniform_grid(inst.sys.domain(), 20001);
    for (std::size_t i = 1; i < g.size(); ++i) var += std::abs(d.Phi(g[i]) - d.Phi(g[i - 1]));
    EXPECT_LE(static_cast<double>(chain.classes.size()), var / pi + 2) << "seed " << s;
    EXPECT_LE(lo, hi);
  }
}

TEST(PhaseProperty, ElementsSitOnTheirLevel) {
  for (std::uint64_t s = 70; s < 90; ++s) {
    const auto inst = instances::random_system(s);
    const auto d = decompose(inst.sys, inst.init);
    for (const auto& e : null_elements(d, inst.sys.domain())) {
      for (double t : {e.span.lo, 0.5 * (e.span.lo + e.span.hi), e.span.hi})
        EXPECT_LE(std::abs(d.Phi(t) - e.level * pi), 1e-7) << "seed " << s;
    }
  }
}
