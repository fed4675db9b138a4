// Compares the algebraic verdict with the geometric gap between TE and TE + b
// for a few diagonal pairs.
#include <cstdio>
#include <string>

#include "locuskit/attractor.hpp"

int main() {
  using namespace locuskit;
  const double pairs[][2] = {{0.55, 0.70}, {0.60, 0.65}, {0.8, 0.9}, {0.6180339887498949, 0.6823278038280194}};
  for (const auto& p : pairs) {
    const auto r = connectivity_cross_check(p[0], p[1], 64, 18);
    std::printf("(%.6f, %.6f)  %-16s depth %-3d gap %.3g\n", p[0], p[1], std::string(to_string(r.verdict.kind)).c_str(),
                r.verdict.depth, r.gap);
  }
}
