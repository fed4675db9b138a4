// Envelope of the corner at (golden-ratio reciprocal, 0.68232...) and the
// ratios produced by perturbing its witness.
#include <cstdio>

#include "locuskit/corner_analysis.hpp"

int main() {
  using namespace locuskit;
  const TernarySeries h({1, -1, -1, -1, 0}, 1);  // 1 - x - x^2 - x^3 + x^5/(1-x)
  const auto env = corner_envelope(h);
  std::printf("gamma0 = %.15f\nlambda0 = %.15f\nalpha = %.9f\nc1 = %.6f  c2 = %.6f\n\n", env.gamma0, env.lambda0,
              env.alpha, env.c1, env.c2);
  const auto report = corner_membership_check(env, 30, 60, standard_r_samples());
  std::fputs(report.csv().c_str(), stdout);
  return report.all_pass() ? 0 : 1;
}
