// f = 0 on [0, pi], sin^2 on [pi, 2pi], g = 1, from (0, 1): phi vanishes on all
// of [0, pi], which shows up as a single continuum null-element.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "sturmlab/phase.hpp"

using namespace sturmlab;

int main() {
  constexpr double pi = std::numbers::pi;
  const CoefficientFn f({{0, pi, ConstantPiece{0.0}}, {pi, 2 * pi, SinPowPiece{1, 1, 0, 2}}});
  const SystemCoefficients sys(f, CoefficientFn::constant({0, 2 * pi}, 1.0));

  const auto tr = integrate_system(sys, {0, 1}, sys.domain());
  std::printf("phi(pi/2) = %.3e   psi(pi/2) = %.6f\n", tr.phi(pi / 2), tr.psi(pi / 2));

  const auto d = decompose(sys, {0, 1});
  std::printf("mu = %g, theta = %g, min Im z = %.4f\n", d.mu, d.theta, d.cps.min_y());
  const auto chain = null_classes(d, sys.domain());
  for (const auto& c : chain.classes) {
    std::printf("class at level %ld, hull [%.10f, %.10f]\n", c.level(), c.hull.lo, c.hull.hi);
    for (const auto& e : c.elements)
      std::printf("  %-9s [%.10f, %.10f]\n", to_string(e.kind), e.span.lo, e.span.hi);
  }
}
