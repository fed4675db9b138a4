// Prints the second-zero and third-zero boundaries next to the witnesses that
// realize them.
#include <cstdio>

#include "locuskit/star_functions.hpp"

int main() {
  using namespace locuskit;
  std::printf("alpha2 = %.9f  alpha3 = %.9f\n\n", alpha2(), alpha3());

  std::printf("gamma   phi(gamma)   witness\n");
  for (int i = 0; i < 14; ++i) {
    const double g = 0.51 + 0.01 * i;
    const auto r = phi(g);
    std::printf("%.2f    %.6f     h_%d with a = %+.6f\n", g, r.lambda, r.k_used, r.witness.a());
  }

  std::printf("\ngamma   psi(gamma)   witness\n");
  for (double g = 0.53; g < 0.72; g += 0.02) {
    const auto r = psi(g);
    std::printf("%.2f    %.6f     H_{%d,%d} with a = %+.4f, b = %+.4f\n", g, r.lambda, r.witness.k(),
                r.witness.l(), r.witness.a(), r.witness.b());
  }
}
