// y' + y^2 + 1 = 0 from y(0) = y0 has poles spaced by pi; near each one y
// runs off to -inf from the left and comes back from +inf.

#include <cstdio>
#include <cstdlib>

#include "sturmlab/riccati.hpp"

using namespace sturmlab;

int main(int argc, char** argv) {
  const double y0 = argc > 1 ? std::atof(argv[1]) : 0.0;
  const Interval D(0, 10);
  const SystemCoefficients sys(CoefficientFn::constant(D, 1), CoefficientFn::constant(D, 1));
  const auto sol = solve_riccati(sys, 0, y0, D);
  for (const auto& p : poles(sol, D)) {
    const auto lim = probe_pole(sol, p, 1e-6);
    std::printf("pole at %.10f   y(left) = %.3e   y(right) = %.3e\n", p.lo, lim.left_min, lim.right_max);
  }
  const auto mi = max_interval(sol, 0, D);
  std::printf("maximal interval through 0: (%.10f, %.10f)\n", mi.t1, mi.t2);
}
