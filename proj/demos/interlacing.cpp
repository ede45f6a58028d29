// sin 2t against sin t: between consecutive null-classes of the slower
// solution the faster one has at least one of its own.

#include <cstdio>
#include <numbers>

#include "sturmlab/compare.hpp"

using namespace sturmlab;

int main() {
  constexpr double pi = std::numbers::pi;
  const Interval D(0, 2 * pi + 0.2);
  const SystemCoefficients fast(CoefficientFn::constant(D, 1), CoefficientFn::constant(D, 4));
  const SystemCoefficients slow(CoefficientFn::constant(D, 1), CoefficientFn::constant(D, 1));
  const auto u1 = integrate_system(fast, {0, 1}, D), u2 = integrate_system(slow, {0, 1}, D);

  const auto v = verify_theorem31(u1, fast, u2, slow, 0, D.hi);
  std::printf("hypothesis: %s\n", to_string(v.hypothesis_report.verdict));
  for (const auto& c : v.hypothesis_report.conditions)
    std::printf("  [%s] %s\n", to_string(c.outcome), c.name.c_str());
  for (const auto& g : v.details) {
    std::printf("gap (%.6f, %.6f]:", g.lo, g.hi);
    for (const auto& c : g.found) std::printf(" %.6f", c.lo);
    std::printf("\n");
  }
  if (v.count_check)
    std::printf("count on (%.6f, %.6f]: %zu found, %zu required\n", v.count_check->lo, v.count_check->hi,
                v.count_check->found, v.count_check->required);
  std::printf("conclusion %s\n", v.conclusion_holds ? "holds" : "FAILS");
}
