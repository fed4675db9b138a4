#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "locuskit/attractor.hpp"
#include "locuskit/series_core.hpp"
#include "locuskit/star_functions.hpp"

using namespace locuskit;

// Each suite draws 1000 cases from a fixed seed.

namespace {

constexpr int kCases = 1000;

TernarySeries random_series(std::mt19937_64& rng, int max_prefix = 12) {
  std::uniform_int_distribution<int> len(1, max_prefix), digit(-1, 1);
  std::vector<int> prefix(static_cast<std::size_t>(len(rng)));
  for (auto& d : prefix) d = digit(rng);
  prefix[0] = 1;
  return TernarySeries(prefix, digit(rng));
}

// h_k^(u) - h_l^(v) coefficient by coefficient, so that the comparison does
// not cancel at small x.
RealTailSeries difference(const StarFn& p, const StarFn& q) {
  const auto& a = p.series();
  const auto& b = q.series();
  const std::size_t n = std::max(a.prefix.size(), b.prefix.size());
  RealTailSeries d{std::vector<double>(n), a.tail - b.tail};
  for (std::size_t i = 0; i < n; ++i) {
    d.prefix[i] = (i < a.prefix.size() ? a.prefix[i] : a.tail) - (i < b.prefix.size() ? b.prefix[i] : b.tail);
  }
  return d;
}

}  // namespace

TEST(Property, DescartesBound) {
  std::mt19937_64 rng(11);
  int unresolved = 0;
  for (int i = 0; i < kCases; ++i) {
    const auto s = random_series(rng);
    try {
      const auto zs = positive_zeros(s);
      EXPECT_LE(zs.count(), sign_changes(s.sign_pattern())) << i;
    } catch (const UnresolvedCluster&) {
      ++unresolved;
    }
  }
  EXPECT_EQ(unresolved, 0);
}

TEST(Property, TailTruncationBound) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ux(0.01, 0.99);
  std::uniform_int_distribution<int> extra(0, 40);
  for (int i = 0; i < kCases; ++i) {
    const auto s = random_series(rng);
    const double x = ux(rng);
    const int N = static_cast<int>(s.prefix().size()) - 1 + extra(rng);
    double p = 0.0;
    for (int n = N; n >= 0; --n) p = p * x + s.coefficient(static_cast<std::size_t>(n));
    const double bound = std::pow(x, N + 1) / (1.0 - x);
    EXPECT_LE(std::abs(eval(s, x) - p), bound * (1 + 1e-12) + 1e-14 / (1.0 - x)) << i;
  }
}

TEST(Property, SecondDerivativeBound) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ux(0.001, 0.95);
  for (int i = 0; i < kCases; ++i) {
    const auto s = random_series(rng);
    const double x = ux(rng);
    // Equality holds for tail +1 from x^2 on; allow rounding of the sum.
    EXPECT_LE(std::abs(eval_d2(s, x)), 2.0 / std::pow(1.0 - x, 3) * (1 + 1e-12)) << i;
  }
}

TEST(Property, OrderMonotonicity) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> uk(1, 16);
  std::uniform_real_distribution<double> uc(-1.0, 1.0), ux(0.01, 0.99);
  for (int i = 0; i < kCases; ++i) {
    int k = uk(rng), l = uk(rng);
    double u = uc(rng), v = uc(rng);
    if (k > l || (k == l && u < v)) {
      std::swap(k, l);
      std::swap(u, v);
    }
    if (k == l && u == v) continue;
    const double x = ux(rng);
    const StarFn p(k, u), q(l, v);
    EXPECT_GE(p.value(x), q.value(x));
    EXPECT_GT(difference(p, q).value(x), 0.0) << k << "," << u << " vs " << l << "," << v << " at " << x;
  }
}

TEST(Property, GluingIdentity) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> ux(0.001, 0.999);
  int cases = 0;
  for (int k = 1; k <= 16; ++k) {
    for (int i = 0; i < 100; ++i, ++cases) {
      const double x = ux(rng);
      const double lhs = StarFn(k, -1.0).value(x), rhs = StarFn(k + 1, 1.0).value(x);
      EXPECT_NEAR(lhs, rhs, 1e-13 / (1.0 - x)) << k << " " << x;
    }
  }
  EXPECT_GE(cases, kCases);
}

TEST(Property, PhiDecreasingAndPsiAbovePhi) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> ug(0.51, 0.64);
  for (int i = 0; i < kCases; ++i) {
    double a = ug(rng), b = ug(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const auto pa = phi(a), pb = phi(b);
    EXPECT_GT(pa.lambda, pb.lambda) << a << " " << b;
    EXPECT_LT(pa.witness.jet(a).d1, 0.0);
    EXPECT_GT(pa.witness.jet(pa.lambda).d1, 0.0);
  }
  for (double g = 0.53; g <= 0.64; g += 0.01) EXPECT_GT(psi(g).lambda, phi(g).lambda) << g;
}

TEST(Property, CloudSelfAffinity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uc(-0.95, 0.95), ub(-2.0, 2.0);
  std::uniform_int_distribution<int> ud(0, 9), uf(0, 2);
  int checked = 0;
  while (checked < kCases) {
    const Vec2 b{ub(rng), ub(rng)};
    AffinePair pair = AffinePair::jordan(0.5);
    try {
      switch (uf(rng)) {
        case 0: pair = AffinePair::diagonal(uc(rng), uc(rng), b); break;
        case 1: {
          const double a = uc(rng) * 0.7, c = uc(rng) * 0.7;
          pair = AffinePair::rotation(a, c, b);
          break;
        }
        default: pair = AffinePair::jordan(uc(rng), b); break;
      }
    } catch (const DomainError&) {
      continue;
    }
    const int d = ud(rng);
    const auto coarse = attractor_points(pair, d, 1), fine = attractor_points(pair, d + 1, 1);
    ASSERT_EQ(fine.points.size(), 2 * coarse.points.size());
    for (std::size_t j = 0; j < coarse.points.size(); ++j) {
      const Vec2 t = pair.apply(coarse.points[j]);
      ASSERT_EQ(fine.points[2 * j], t);
      ASSERT_EQ(fine.points[2 * j + 1], (Vec2{t.x + b.x, t.y + b.y}));
    }
    ++checked;
  }
}

TEST(Property, PositiveZerosIsDeterministic) {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_series(rng);
    EXPECT_EQ(positive_zeros(s), positive_zeros(s));
  }
}
