#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "locuskit/corner_analysis.hpp"
#include "locuskit/locus_membership.hpp"
#include "oracles.hpp"

using namespace locuskit;

namespace {

// Zeros of the five (*)-function corner witnesses at full precision.
const double kCorners[5][2] = {{0.6180339887498949, 0.6823278038280194},
                               {0.5506065793341350, 0.7690997031778959},
                               {0.5329584919975335, 0.8049162728646657},
                               {0.5197029404221313, 0.8322182906155818},
                               {0.5139512629612147, 0.8506859860027766}};

}  // namespace

TEST(TrivialInside, ProductAtLeastOneHalf) {
  EXPECT_TRUE(trivial_inside(0.8, 0.8));
  EXPECT_TRUE(trivial_inside(0.625, 0.8));  // product exactly 1/2
  EXPECT_FALSE(trivial_inside(0.5, 1.0 - 1e-12));
  EXPECT_TRUE(trivial_inside(std::sqrt(0.5), std::sqrt(0.5) + 1e-15));
  EXPECT_FALSE(trivial_inside(0.6, 0.8));
  EXPECT_THROW(trivial_inside(0.0, 0.5), DomainError);
  EXPECT_THROW(trivial_inside(0.5, 1.0), DomainError);
}

TEST(ClassifyPoint, TrivialRegion) {
  const auto v = classify_point(0.8, 0.8, 10);
  EXPECT_EQ(v.kind, VerdictKind::kTrivialInside);
}

TEST(ClassifyPoint, DisconnectedPairIsCertifiedAtDepthSix) {
  const auto v = classify_point(0.55, 0.70, 64);
  EXPECT_EQ(v.kind, VerdictKind::kCertifiedOutside);
  EXPECT_EQ(v.depth, 6);
  EXPECT_EQ(v.surviving, 0u);
  EXPECT_EQ(oracle::surviving_prefixes(0.55, 0.70, 6, std::ldexp(1.0, -40)), 0);
  EXPECT_GT(oracle::surviving_prefixes(0.55, 0.70, 5, std::ldexp(1.0, -40)), 0);
}

TEST(ClassifyPoint, SurvivorCountsMatchExhaustiveEnumeration) {
  for (auto [g, l] : std::vector<std::pair<double, double>>{{0.6, 0.68}, {0.62, 0.64}, {0.53, 0.8}, {0.66, 0.7}}) {
    for (int n = 1; n <= 8; ++n) {
      const auto v = classify_point(g, l, n);
      const auto expected = oracle::surviving_prefixes(g, l, n, std::ldexp(1.0, -40));
      if (expected == 0) {
        EXPECT_EQ(v.kind, VerdictKind::kCertifiedOutside);
        break;
      }
      EXPECT_EQ(v.kind, VerdictKind::kUndecided);
      EXPECT_EQ(static_cast<long long>(v.surviving), expected) << g << "," << l << " n=" << n;
    }
  }
}

TEST(ClassifyPoint, SymmetricInItsArguments) {
  for (auto [g, l] : std::vector<std::pair<double, double>>{{0.55, 0.7}, {0.6, 0.68}, {0.64, 0.641}}) {
    EXPECT_EQ(classify_point(g, l, 32), classify_point(l, g, 32));
  }
}

TEST(ClassifyPoint, CornersStayUndecided) {
  for (const auto& c : kCorners) {
    const auto v = classify_point(c[0], c[1], 64);
    EXPECT_EQ(v.kind, VerdictKind::kUndecided) << c[0] << "," << c[1];
    EXPECT_FALSE(v.frontier_overflow);
  }
}

TEST(ClassifyPoint, RoundedGoldenCornerIsOutside) {
  // Six-digit roundings of the corner sit in the thin exterior next to it.
  EXPECT_EQ(classify_point(0.618034, 0.68232, 64).kind, VerdictKind::kCertifiedOutside);
}

TEST(ClassifyPoint, ValidatesArguments) {
  EXPECT_THROW(classify_point(0.0, 0.6, 10), DomainError);
  EXPECT_THROW(classify_point(0.6, 0.6, 0), DomainError);
}

TEST(CertifyOutside, OverflowIsAnError) {
  SearchLimits tiny{4};
  const auto v = classify_point(0.6, 0.68, 30, tiny);
  EXPECT_EQ(v.kind, VerdictKind::kUndecided);
  EXPECT_TRUE(v.frontier_overflow);
  EXPECT_THROW(certify_outside(0.6, 0.68, 30, tiny), FrontierOverflow);
  EXPECT_EQ(certify_outside(0.55, 0.70, 64).kind, VerdictKind::kCertifiedOutside);
}

TEST(FindWitness, CornerWitnessPrefix) {
  const auto w = find_witness(kCorners[0][0], kCorners[0][1], 24);
  ASSERT_TRUE(w.has_value());
  ASSERT_EQ(w->size(), 25u);
  const TernarySeries h({1, -1, -1, -1, 0}, 1);
  for (std::size_t n = 0; n < w->size(); ++n) EXPECT_EQ((*w)[n], h.coefficient(n)) << n;
}

TEST(FindWitness, PrefixSatisfiesTailBound) {
  const double g = 0.65, l = 0.7;
  const int depth = 12;
  const auto w = find_witness(g, l, depth);
  ASSERT_TRUE(w.has_value());
  double pg = 0.0, pl = 0.0;
  for (int n = depth; n >= 0; --n) {
    pg = pg * g + (*w)[n];
    pl = pl * l + (*w)[n];
  }
  EXPECT_LE(std::abs(pg), std::pow(g, depth + 1) / (1 - g) + 1e-10);
  EXPECT_LE(std::abs(pl), std::pow(l, depth + 1) / (1 - l) + 1e-10);
}

TEST(FindWitness, NoneWhenCertified) { EXPECT_FALSE(find_witness(0.55, 0.70, 10).has_value()); }

TEST(ClassifyBox, BoxesAroundCornersAreNeverCertified) {
  for (const auto& c : kCorners) {
    for (double r : {1e-6, 1e-4, 2e-3}) {
      const ParameterBox box{c[0] - r, c[0] + r, c[1] - r, c[1] + r};
      EXPECT_NE(classify_box(box, 40).kind, VerdictKind::kCertifiedOutside) << c[0] << " r=" << r;
    }
  }
}

TEST(ClassifyBox, CertifiedBoxHasOnlyCertifiedPoints) {
  const ParameterBox box{0.545, 0.555, 0.695, 0.705};
  ASSERT_EQ(classify_box(box, 40).kind, VerdictKind::kCertifiedOutside);
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const double g = box.gamma_lo + i * 0.001, l = box.lambda_lo + j * 0.001;
      EXPECT_EQ(classify_point(g, l, 64).kind, VerdictKind::kCertifiedOutside);
    }
  }
}

TEST(ClassifyBox, DegenerateBoxAgreesWithPointSearch) {
  for (auto [g, l] : std::vector<std::pair<double, double>>{{0.55, 0.7}, {0.6, 0.68}, {0.53, 0.8}}) {
    const auto vb = classify_box({g, g, l, l}, 30);
    const auto vp = classify_point(g, l, 30);
    EXPECT_EQ(vb.kind, vp.kind);
    EXPECT_EQ(vb.depth, vp.depth);
  }
}

TEST(ClassifyBox, TrivialOnlyWhenWholeBoxIs) {
  EXPECT_EQ(classify_box({0.75, 0.8, 0.7, 0.8}, 10).kind, VerdictKind::kTrivialInside);
  EXPECT_NE(classify_box({0.69, 0.8, 0.7, 0.8}, 10).kind, VerdictKind::kTrivialInside);
  EXPECT_THROW(classify_box({0.6, 0.5, 0.7, 0.8}, 10), DomainError);
}

TEST(Render, GreyExactlyWhereTheCenterIsTrivial) {
  GridSpec grid;
  grid.width = grid.height = 32;
  grid.depth = 24;
  const auto r = render(grid, 2);
  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      const bool trivial = grid.gamma_at(col) * grid.lambda_at(row) >= 0.5;
      EXPECT_EQ(r.image.at(col, row) == grid.palette.trivial_inside, trivial) << col << "," << row;
    }
  }
}

TEST(Render, MirrorSymmetricOnSquareGrid) {
  GridSpec grid;
  grid.width = grid.height = 40;
  grid.depth = 24;
  const auto r = render(grid, 1);
  const int n = grid.width;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      // (gamma index, lambda index) = (col, n-1-row); swap them.
      EXPECT_EQ(r.image.at(col, row), r.image.at(n - 1 - row, n - 1 - col));
    }
  }
}

TEST(Render, IndependentOfThreadCount) {
  GridSpec grid;
  grid.gamma_min = 0.5;
  grid.gamma_max = 0.7;
  grid.lambda_min = 0.6;
  grid.lambda_max = 0.9;
  grid.width = 24;
  grid.height = 20;
  grid.depth = 28;
  const auto a = render(grid, 1);
  const auto b = render(grid, 4);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.verdicts, b.verdicts);
  EXPECT_EQ(encode_pgm(a.image), encode_pgm(b.image));
}

TEST(Render, VerdictCsvLayout) {
  GridSpec grid;
  grid.width = 3;
  grid.height = 2;
  grid.depth = 8;
  const auto r = render(grid, 1);
  const auto csv = verdict_csv(grid, r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "gamma,lambda,verdict,depth,surviving");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Render, PgmHeader) {
  GrayImage img(3, 2, 7);
  const auto bytes = encode_pgm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P5\n3 2\n255\n");
  EXPECT_EQ(bytes.size(), 11u + 6u);
}

TEST(Render, RejectsBadGrids) {
  GridSpec grid;
  grid.width = 0;
  EXPECT_THROW(render(grid), DomainError);
  grid.width = 4;
  grid.gamma_max = 1.0;
  EXPECT_THROW(render(grid), DomainError);
}
