#include "haystack/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "haystack/tails.hpp"

namespace haystack {
namespace {

InfoParams spot_params() {
  // p = 0.01, J = 7.2e-5 bits, I_ver = 0.5 bits.
  return {.p = 0.01,
          .screening_info = 7.2e-5,
          .verification_info = 0.5,
          .claim_entropy = 1.0};
}

TEST(BudgetsAndParams, Validation) {
  EXPECT_NO_THROW((Budgets{10000, 100}).validate());
  EXPECT_THROW((Budgets{0, 0}).validate(), std::invalid_argument);
  EXPECT_THROW((Budgets{100, 101}).validate(), std::invalid_argument);
  EXPECT_THROW((Budgets{100, -1}).validate(), std::invalid_argument);
  EXPECT_NEAR((Budgets{10000, 100}).alpha(), 0.01, 1e-18);

  EXPECT_NO_THROW(spot_params().validate());
  InfoParams bad = spot_params();
  bad.p = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = spot_params();
  bad.verification_info = 1.5;  // exceeds the claim entropy
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = spot_params();
  bad.screening_info = -1e-9;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(EnrichmentBound, PinsAndClamps) {
  EXPECT_DOUBLE_EQ(enrichment_bound(0.3, 0.0, 0.5), 0.3);
  EXPECT_DOUBLE_EQ(enrichment_bound(0.99, 10.0, 0.01), 1.0);
  EXPECT_NEAR(enrichment_bound(0.01, 7.1746308647424595e-05, 0.01),
              0.059865194050833681, 1e-15);
  EXPECT_THROW(enrichment_bound(0.3, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(enrichment_bound(0.3, 0.1, 1.5), std::invalid_argument);
  EXPECT_THROW(enrichment_bound(0.3, -0.1, 0.5), std::invalid_argument);
  for (double alpha : {1e-4, 1e-2, 0.5, 1.0}) {
    for (double j : {0.0, 1e-5, 1e-2, 10.0}) {
      const double e = enrichment_bound(0.2, j, alpha);
      EXPECT_GE(e, 0.2);
      EXPECT_LE(e, 1.0);
    }
  }
}

TEST(ConverseGain, PinsAndEdges) {
  const auto params = spot_params();
  EXPECT_NEAR(converse_gain(params, Budgets{10000, 100}), 2.9976638334730934,
              1e-13);
  EXPECT_DOUBLE_EQ(converse_gain(params, Budgets{10000, 0}), 0.0);
  InfoParams blind = params;
  blind.screening_info = 0.0;
  EXPECT_NEAR(converse_gain(blind, Budgets{10000, 100}), 0.5 * 100 * 0.01,
              1e-15);
  // Continuous overload agrees with the integer one.
  EXPECT_DOUBLE_EQ(converse_gain(params, 10000.0, 100.0),
                   converse_gain(params, Budgets{10000, 100}));
  EXPECT_THROW(converse_gain(params, 10000.0, -1.0), std::invalid_argument);
  EXPECT_THROW(converse_gain(params, 10000.0, 10001.0), std::invalid_argument);
}

TEST(ConverseGain, MonotoneInEveryArgument) {
  const auto base = spot_params();
  const double ref = converse_gain(base, 10000.0, 100.0);
  InfoParams tweak = base;
  tweak.screening_info *= 2.0;
  EXPECT_GT(converse_gain(tweak, 10000.0, 100.0), ref);
  tweak = base;
  tweak.verification_info *= 1.5;
  EXPECT_GT(converse_gain(tweak, 10000.0, 100.0), ref);
  tweak = base;
  tweak.p *= 2.0;
  EXPECT_GT(converse_gain(tweak, 10000.0, 100.0), ref);
  EXPECT_GT(converse_gain(base, 20000.0, 100.0), ref);
  EXPECT_GT(converse_gain(base, 10000.0, 150.0), ref);
}

TEST(RequiredBudget, PinsAndLimits) {
  const auto params = spot_params();
  EXPECT_NEAR(required_budget(params, 10000.0, 0.5), 3.715242134114455, 1e-12);
  EXPECT_DOUBLE_EQ(required_budget(params, 10000.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(required_budget(params, 10000.0, -1.0), 0.0);
  InfoParams blind = params;
  blind.screening_info = 0.0;
  EXPECT_NEAR(required_budget(blind, 10000.0, 0.5), 0.5 / (0.5 * 0.01), 1e-9);
  InfoParams dead = params;
  dead.verification_info = 0.0;
  EXPECT_THROW(required_budget(dead, 10000.0, 0.5), std::domain_error);
}

TEST(RequiredBudget, RoundTripsThroughConverse) {
  const auto params = spot_params();
  for (double delta = 1e-3; delta <= 10.0; delta *= 10.0) {
    const double b = required_budget(params, 10000.0, delta);
    EXPECT_NEAR(converse_gain(params, 10000.0, b) / delta, 1.0, 1e-9) << delta;
  }
}

TEST(RequiredBudget, StableWhenTargetIsTiny) {
  // The naive sqrt difference cancels here; the rearranged form keeps full
  // relative precision and the round-trip still closes.
  const auto params = spot_params();
  const double delta = 1e-12;
  const double b = required_budget(params, 10000.0, delta);
  EXPECT_GT(b, 0.0);
  EXPECT_NEAR(converse_gain(params, 10000.0, b) / delta, 1.0, 1e-9);
}

TEST(ScoreConstant, PinsAndUniversalCeiling) {
  EXPECT_NEAR(score_constant(0.05, 0.1, gaussian_tail_mean(0.1)),
              0.14241230841169752, 1e-15);
  EXPECT_NEAR(score_constant(0.01, 0.01, gaussian_tail_mean(0.01)),
              0.031223202625232345, 1e-15);
  // c_G <= sqrt(ln2/2) for every standardized score law; exercised over both
  // families and a broad (p, alpha) grid.
  for (double p : {0.005, 0.01, 0.05, 0.2, 0.5}) {
    for (double alpha : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0}) {
      EXPECT_LE(score_constant(p, alpha, gaussian_tail_mean(alpha)),
                kMaxScoreConstant + 1e-15)
          << p << " " << alpha;
      for (double nu : {3.5, 4.0, 5.0}) {
        EXPECT_LE(score_constant(p, alpha, pareto_tail_mean(nu, alpha)),
                  kMaxScoreConstant + 1e-15)
            << p << " " << alpha << " " << nu;
      }
    }
  }
  EXPECT_THROW(score_constant(0.01, 0.0, 1.0), std::invalid_argument);
}

TEST(AchievableGainWeak, SpotAndOrdering) {
  const auto params = spot_params();
  const Budgets budgets{10000, 100};
  const double m = gaussian_tail_mean(budgets.alpha());
  EXPECT_NEAR(achievable_gain_weak(params, budgets, m), 0.63246882983998042,
              1e-13);
  // m = 0 removes the tail leverage entirely.
  EXPECT_NEAR(achievable_gain_weak(params, budgets, 0.0), 0.5 * 100 * 0.01,
              1e-15);
  EXPECT_DOUBLE_EQ(achievable_gain_weak(params, Budgets{10000, 0}, m), 0.0);
  // random <= achievable <= converse across budgets.
  for (std::int64_t b : {1, 10, 100, 1000, 10000}) {
    const Budgets bb{10000, b};
    const double tail = gaussian_tail_mean(bb.alpha());
    const double random_gain = achievable_gain_weak(params, bb, 0.0);
    const double achievable = achievable_gain_weak(params, bb, tail);
    const double converse = converse_gain(params, bb);
    EXPECT_LE(random_gain, achievable) << b;
    EXPECT_LE(achievable, converse * (1.0 + 1e-15)) << b;
  }
}

TEST(AchievableGainGlobal, EntropyCeilingBinds) {
  InfoParams params = spot_params();
  params.claim_entropy = 0.3;
  params.verification_info = 0.3;
  const Budgets budgets{10000, 1000};
  const double m = gaussian_tail_mean(budgets.alpha());
  EXPECT_DOUBLE_EQ(achievable_gain_global(params, budgets, m), 0.3);
  params.claim_entropy = 100.0;
  EXPECT_DOUBLE_EQ(achievable_gain_global(params, budgets, m),
                   achievable_gain_weak(params, budgets, m));
}

TEST(ExpectedMinBinomial, ExactSummationPins) {
  EXPECT_NEAR(expected_min_binomial(10000, 0.01, 50), 49.999999980533374, 1e-9);
  EXPECT_NEAR(expected_min_binomial(10000, 0.01, 100), 96.033881228283562,
              1e-9);
  EXPECT_NEAR(expected_min_binomial(10000, 0.01, 200), 100.0, 1e-9);
  EXPECT_NEAR(expected_min_binomial(100, 0.3, 7), 6.9999999967603266, 1e-12);
  // B >= K: the min never binds.
  EXPECT_DOUBLE_EQ(expected_min_binomial(50, 0.2, 50), 10.0);
  EXPECT_DOUBLE_EQ(expected_min_binomial(50, 0.0, 10), 0.0);
  EXPECT_DOUBLE_EQ(expected_min_binomial(50, 1.0, 10), 10.0);
  EXPECT_DOUBLE_EQ(expected_min_binomial(50, 0.2, 0), 0.0);
  EXPECT_THROW(expected_min_binomial(0, 0.2, 1), std::invalid_argument);
  EXPECT_THROW(expected_min_binomial(50, 1.2, 1), std::invalid_argument);
}

TEST(OracleCeiling, ScalesExpectationByVerificationInfo) {
  const auto params = spot_params();
  const Budgets budgets{10000, 50};
  const double expected = expected_min_binomial(budgets.k, params.p, budgets.b);
  EXPECT_DOUBLE_EQ(oracle_ceiling(params, budgets, expected), 0.5 * expected);
  EXPECT_THROW(oracle_ceiling(params, budgets, -1.0), std::invalid_argument);
}

TEST(SqrtLawCurve, BreakpointPin) {
  EXPECT_NEAR(sqrt_law_breakpoint(0.05, 400.0, 0.45), 89.750692520775644,
              1e-12);
  EXPECT_THROW(sqrt_law_breakpoint(0.05, 400.0, 0.0), std::invalid_argument);
}

TEST(SqrtLawCurve, TwoRegimesAroundTheBreakpoint) {
  InfoParams params{.p = 0.05,
                    .screening_info = 0.04,
                    .verification_info = 0.531,
                    .claim_entropy = 1.0};
  const double k = 10000.0;  // JK = 400
  std::vector<std::int64_t> grid;
  for (std::int64_t b = 1; b <= 200; ++b) {
    grid.push_back(b);
  }
  const auto curve = sqrt_law_curve(params, k, grid, 0.45);
  ASSERT_EQ(curve.size(), grid.size());
  const double bstar = sqrt_law_breakpoint(params.p, 400.0, 0.45);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double b = static_cast<double>(grid[i]);
    if (b < bstar) {
      EXPECT_NEAR(curve[i], params.verification_info * b, 1e-12) << b;
    } else {
      const double sloped = b * (params.p + 0.45 * std::sqrt(400.0 / b));
      EXPECT_NEAR(curve[i], params.verification_info * sloped, 1e-12) << b;
      EXPECT_LE(curve[i], params.verification_info * b + 1e-12) << b;
    }
  }
}

TEST(SqrtLawCurve, MaxConstantReproducesConverse) {
  // With JK small the clip never binds and c = sqrt(ln2/2) must land exactly
  // on the converse.
  InfoParams params{.p = 0.05,
                    .screening_info = 1e-4,
                    .verification_info = 0.7,
                    .claim_entropy = 1.0};
  const double k = 10000.0;
  const std::vector<std::int64_t> grid{1, 5, 50, 500, 5000};
  const auto curve = sqrt_law_curve(params, k, grid, kMaxScoreConstant);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double expected =
        converse_gain(params, k, static_cast<double>(grid[i]));
    EXPECT_NEAR(curve[i] / expected, 1.0, 1e-14) << grid[i];
  }
  EXPECT_THROW(sqrt_law_curve(params, k, grid, kMaxScoreConstant + 1e-12),
               std::invalid_argument);
  EXPECT_THROW(sqrt_law_curve(params, k, grid, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace haystack
