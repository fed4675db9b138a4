#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "locuskit/corner_analysis.hpp"
#include "oracles.hpp"

using namespace locuskit;

namespace {

const TernarySeries kGolden({1, -1, -1, -1, 0}, 1);  // 1 - x - x^2 - x^3 + x^5/(1-x)

struct CornerCase {
  TernarySeries h;
  double gamma0, lambda0;  // published 5-6 digit values
};

std::vector<CornerCase> corner_cases() {
  return {{kGolden, 0.618034, 0.68232},
          {TernarySeries({1, -1, -1, -1, -1}, 1), 0.550607, 0.7691},
          {TernarySeries({1, -1, -1, -1, -1, 0}, 1), 0.532958, 0.804916},
          {TernarySeries({1, -1, -1, -1, -1, -1}, 1), 0.519703, 0.83221},
          {TernarySeries({1, -1, -1, -1, -1, -1, 0}, 1), 0.513951, 0.85068}};
}

Interval around(double x) { return {x - 5e-3, x + 5e-3}; }

}  // namespace

TEST(CornerEnvelope, GoldenCornerIsAnAlgebraicPair) {
  const auto env = corner_envelope(kGolden, around(0.618034), around(0.68232));
  EXPECT_NEAR(env.gamma0, oracle::golden_reciprocal(), 1e-15);
  EXPECT_NEAR(env.lambda0, oracle::cubic_root_x3_plus_x_minus_1(), 1e-15);
  EXPECT_TRUE(env.star_witness);
}

TEST(CornerEnvelope, ReproducesTheFiveCorners) {
  for (const auto& c : corner_cases()) {
    const auto env = corner_envelope(c.h, around(c.gamma0), around(c.lambda0));
    EXPECT_NEAR(env.gamma0, c.gamma0, 1e-5);
    EXPECT_NEAR(env.lambda0, c.lambda0, 1e-5);
    EXPECT_GT(env.alpha, 0.0);
    EXPECT_LT(env.alpha, 1.0);
    EXPECT_NEAR(std::pow(env.gamma0, env.alpha), env.lambda0, 1e-9);
    EXPECT_LT(env.c1, env.c2);
    EXPECT_GT(env.c1, 0.0);
    EXPECT_TRUE(env.star_witness);
  }
}

TEST(CornerEnvelope, ConstantsFollowTheirFormulas) {
  const auto env = corner_envelope(kGolden);
  const auto c = oracle::prefix_tail({1, -1, -1, -1, 0}, 1);
  const double dg = oracle::direct_d1(c, env.gamma0), dl = oracle::direct_d1(c, env.lambda0);
  const double a = std::log(env.lambda0) / std::log(env.gamma0);
  const double c1 = 2 * std::pow(std::abs(dg), a) * std::pow(1 - env.gamma0, a) / (std::pow(2.0, a) * 3 * dl);
  const double c2 = std::pow(3.0, a) * 2 * std::pow(std::abs(dg), a) / (std::pow(2.0, a) * (1 - env.lambda0) * dl);
  EXPECT_NEAR(env.c1, c1, 1e-9 * c1);
  EXPECT_NEAR(env.c2, c2, 1e-9 * c2);
}

TEST(CornerEnvelope, RejectsNonWitnesses) {
  // Tail must be +1.
  EXPECT_THROW(corner_envelope(TernarySeries({1}, -1), around(0.5), around(0.7)), DomainError);
  // No sign change in the bracket.
  EXPECT_THROW(corner_envelope(kGolden, {0.3, 0.4}, around(0.68232)), NotCornerWitness);
  // Brackets swapped: derivative signs are wrong.
  EXPECT_THROW(corner_envelope(kGolden, around(0.68232), around(0.618034)), NotCornerWitness);
}

TEST(CornerEnvelope, NonStarWitnessIsFlagged) {
  // Same zero pattern, but with a second free slot.
  const TernarySeries h({1, -1, -1, -1, 0, 0, 1, 0}, 1);
  const auto env = corner_envelope(h);
  EXPECT_FALSE(env.star_witness);
}

TEST(PerturbedZeros, SandwichBoundsForGeometricR) {
  const auto env = corner_envelope(kGolden);
  const DigitSeries R({1}, 1);
  const int N = 30;
  const auto [gt, lt] = perturbed_zeros(env, N, R);
  const double rg = 1.0 / (1.0 - env.gamma0), rl = 1.0 / (1.0 - env.lambda0);
  const double dg = std::abs(env.h.jet(env.gamma0).d1), dl = env.h.jet(env.lambda0).d1;
  const double ug = 2 * std::pow(env.gamma0, N) * rg / dg, ul = 2 * std::pow(env.lambda0, N) * rl / dl;
  EXPECT_GE(env.gamma0 - gt, ug / 3);
  EXPECT_LE(env.gamma0 - gt, ug);
  EXPECT_GE(lt - env.lambda0, ul / 3);
  EXPECT_LE(lt - env.lambda0, ul);
}

TEST(PerturbedZeros, SandwichBoundForUnitR) {
  const auto env = corner_envelope(kGolden);
  const int N = 40;
  const auto [gt, lt] = perturbed_zeros(env, N, DigitSeries({1}, 0));
  const double dl = env.h.jet(env.lambda0).d1;
  EXPECT_GE(lt - env.lambda0, 2 * std::pow(env.lambda0, N) / (3 * dl));
  EXPECT_LE(lt - env.lambda0, 2 * std::pow(env.lambda0, N) / dl);
  EXPECT_LT(gt, env.gamma0);
}

TEST(PerturbedZeros, ZerosOfThePerturbedSeries) {
  const auto env = corner_envelope(kGolden);
  const int N = 12;
  const auto [gt, lt] = perturbed_zeros(env, N, DigitSeries({1, 1}, 0));
  // h - x^12 - x^13, summed directly.
  auto c = [](int n) {
    const double h = n == 0 ? 1.0 : n < 4 ? -1.0 : n == 4 ? 0.0 : 1.0;
    return h - ((n == 12 || n == 13) ? 1.0 : 0.0);
  };
  EXPECT_NEAR(oracle::direct_sum(c, gt), 0.0, 1e-14);
  EXPECT_NEAR(oracle::direct_sum(c, lt), 0.0, 1e-14);
}

TEST(PerturbedZeros, Errors) {
  const auto env = corner_envelope(kGolden);
  EXPECT_THROW(perturbed_zeros(env, 30, DigitSeries({0}, 0)), DomainError);
  EXPECT_THROW(perturbed_zeros(env, 30, DigitSeries({1, -1}, 0)), DomainError);
  EXPECT_THROW(perturbed_zeros(env, 1, DigitSeries({1}, 1)), PerturbationTooSmall);
}

TEST(PerturbedSeries, CoefficientsStayTernaryBeyondThePrefix) {
  const auto f = perturbed_series(kGolden, 8, DigitSeries({1, 0}, 1));
  for (double c : f.prefix) EXPECT_TRUE(c == -1.0 || c == 0.0 || c == 1.0);
  EXPECT_EQ(f.tail, 0.0);
  EXPECT_EQ(f.prefix[8], 0.0);
  EXPECT_EQ(f.prefix[9], 1.0);
}

TEST(CornerMembershipCheck, AllRatiosInsideTheEnvelope) {
  const auto env = corner_envelope(kGolden);
  const auto report = corner_membership_check(env, 30, 60, standard_r_samples(), 2);
  ASSERT_EQ(report.rows.size(), 31u * 3u);
  EXPECT_TRUE(report.all_pass()) << report.failures();
  EXPECT_EQ(report.rows.front().N, 30);
  EXPECT_EQ(report.rows.front().r_id, "geometric");
  EXPECT_EQ(report.rows.back().N, 60);
  EXPECT_EQ(report.rows.back().r_id, "one_plus_x");
  for (const auto& row : report.rows) {
    EXPECT_LT(row.gamma_tilde, env.gamma0);
    EXPECT_GT(row.lambda_tilde, env.lambda0);
  }
}

TEST(CornerMembershipCheck, EmptySamplesGiveEmptyReport) {
  const auto env = corner_envelope(kGolden);
  EXPECT_TRUE(corner_membership_check(env, 30, 40, {}).rows.empty());
}

TEST(CornerMembershipCheck, SmallNPropagates) {
  const auto env = corner_envelope(kGolden);
  EXPECT_THROW(corner_membership_check(env, 1, 3, standard_r_samples(), 1), PerturbationTooSmall);
}

TEST(CornerMembershipCheck, FailuresNameTheRow) {
  CornerReport r;
  r.rows.push_back({31, "one", 0, 0, 0, 1, 2, false});
  r.rows.push_back({32, "one", 0, 0, 1.5, 1, 2, true});
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.failures(), "(31, one)");
  EXPECT_EQ(r.csv().substr(0, r.csv().find('\n')), "N,R_id,gamma_tilde,lambda_tilde,ratio,c1,c2,pass");
}
