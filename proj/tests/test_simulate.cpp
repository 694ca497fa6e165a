#include "haystack/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "haystack/bounds.hpp"
#include "haystack/distribution.hpp"
#include "haystack/screening.hpp"

namespace haystack {
namespace {

ScreeningModel normal_model(double p, double epsilon) {
  return ScreeningModel(p, epsilon, ScoreDistribution::standard_normal());
}

WindowSample window_from(std::vector<double> eta, std::vector<std::uint8_t> t) {
  WindowSample w;
  w.g = eta;  // scores are irrelevant to selection; eta is what policies see
  w.eta = std::move(eta);
  w.t = std::move(t);
  return w;
}

TEST(VerificationChannel, InformationAndDomain) {
  EXPECT_NEAR(VerificationChannel(0.1).information(), 0.53100440641071878,
              1e-15);
  EXPECT_DOUBLE_EQ(VerificationChannel(0.0).information(), 1.0);
  EXPECT_THROW(VerificationChannel(0.5), std::invalid_argument);
  EXPECT_THROW(VerificationChannel(-0.01), std::invalid_argument);
  EXPECT_DOUBLE_EQ(VerificationChannel::claim_entropy(), 1.0);
}

TEST(SelectIndices, TopBRanksEtaWithTiesToLowestIndex) {
  const auto w = window_from({0.1, 0.9, 0.5}, {0, 1, 1});
  EXPECT_EQ(select_indices(Policy::kTopB, w, 2, 0),
            (std::vector<std::int64_t>{1, 2}));
  const auto ties = window_from({0.5, 0.5, 0.1}, {0, 0, 0});
  EXPECT_EQ(select_indices(Policy::kTopB, ties, 1, 0),
            (std::vector<std::int64_t>{0}));
  EXPECT_EQ(select_indices(Policy::kTopB, ties, 2, 0),
            (std::vector<std::int64_t>{0, 1}));
  EXPECT_TRUE(select_indices(Policy::kTopB, w, 0, 0).empty());
  EXPECT_THROW(select_indices(Policy::kTopB, w, 4, 0), std::invalid_argument);
}

TEST(SelectIndices, OracleTakesRelevantFirstThenPads) {
  const auto w = window_from({0.1, 0.2, 0.3, 0.4}, {0, 1, 1, 0});
  EXPECT_EQ(select_indices(Policy::kOracleB, w, 1, 0),
            (std::vector<std::int64_t>{1}));
  EXPECT_EQ(select_indices(Policy::kOracleB, w, 2, 0),
            (std::vector<std::int64_t>{1, 2}));
  // Fewer relevant records than budget: irrelevant padding in index order.
  EXPECT_EQ(select_indices(Policy::kOracleB, w, 3, 0),
            (std::vector<std::int64_t>{1, 2, 0}));
  EXPECT_EQ(select_indices(Policy::kOracleB, w, 4, 0),
            (std::vector<std::int64_t>{1, 2, 0, 3}));
}

TEST(SelectIndices, RandomBIsUniformWithoutReplacement) {
  const auto w = window_from(std::vector<double>(10, 0.5),
                             std::vector<std::uint8_t>(10, 0));
  const auto full = select_indices(Policy::kRandomB, w, 10, derive_seed(3, 2));
  std::vector<std::int64_t> everything(10);
  std::iota(everything.begin(), everything.end(), 0);
  EXPECT_EQ(full, everything);
  EXPECT_EQ(select_indices(Policy::kRandomB, w, 3, 77),
            select_indices(Policy::kRandomB, w, 3, 77));
  // Marginal inclusion frequency of each index is B/K.
  std::vector<int> counts(10, 0);
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) {
    for (const auto i :
         select_indices(Policy::kRandomB, w, 3, derive_seed(500, s))) {
      ++counts[i];
    }
  }
  const double want = 0.3;
  const double tol = 5.0 * std::sqrt(want * (1.0 - want) / trials);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(counts[i] / static_cast<double>(trials), want, tol) << i;
  }
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
  const auto model = normal_model(0.05, 0.3);
  const Budgets budgets{500, 50};
  const VerificationChannel channel(0.1);
  const auto one = run_experiment(model, Policy::kTopB, budgets, channel, 64,
                                  2026, /*threads=*/1);
  const auto four = run_experiment(model, Policy::kTopB, budgets, channel, 64,
                                   2026, /*threads=*/4);
  EXPECT_EQ(one.mean_hits, four.mean_hits);
  EXPECT_EQ(one.se_hits, four.se_hits);
  EXPECT_EQ(one.mean_gain_bits, four.mean_gain_bits);
  EXPECT_EQ(one.se_gain_bits, four.se_gain_bits);
  EXPECT_EQ(one.replications, 64);
  // Gain is reported through the hit identity.
  EXPECT_DOUBLE_EQ(one.mean_gain_bits, channel.information() * one.mean_hits);
  EXPECT_DOUBLE_EQ(one.mean_selected_hit_rate, one.mean_hits / 50.0);
  EXPECT_THROW(
      run_experiment(model, Policy::kTopB, budgets, channel, 1, 2026),
      std::invalid_argument);
}

TEST(RunExperiment, BlindTopBMatchesRandom) {
  const auto model = normal_model(0.05, 0.0);
  const Budgets budgets{2000, 100};
  const VerificationChannel channel(0.1);
  const auto top =
      run_experiment(model, Policy::kTopB, budgets, channel, 200, 11);
  const auto random =
      run_experiment(model, Policy::kRandomB, budgets, channel, 200, 12);
  const double se = std::hypot(top.se_hits, random.se_hits);
  EXPECT_NEAR(top.mean_hits, random.mean_hits, 4.0 * se);
  EXPECT_NEAR(top.mean_hits, 100 * 0.05, 4.0 * top.se_hits);
}

TEST(RunExperiment, OracleReachesTheBinomialCeiling) {
  const auto model = normal_model(0.01, 0.0);
  const Budgets budgets{10000, 200};
  const VerificationChannel channel(0.1);
  const auto oracle =
      run_experiment(model, Policy::kOracleB, budgets, channel, 100, 21);
  const double expected = expected_min_binomial(budgets.k, 0.01, budgets.b);
  EXPECT_NEAR(oracle.mean_hits, expected, 4.0 * oracle.se_hits);
}

TEST(RunExperiment, PolicyDominanceUnderInformativeScores) {
  const auto model = normal_model(0.05, 0.3);
  const Budgets budgets{2000, 100};
  const VerificationChannel channel(0.1);
  const auto random =
      run_experiment(model, Policy::kRandomB, budgets, channel, 150, 31);
  const auto top =
      run_experiment(model, Policy::kTopB, budgets, channel, 150, 31);
  const auto oracle =
      run_experiment(model, Policy::kOracleB, budgets, channel, 150, 31);
  EXPECT_GE(top.mean_hits,
            random.mean_hits - 2.0 * std::hypot(top.se_hits, random.se_hits));
  EXPECT_LE(top.mean_hits,
            oracle.mean_hits + 2.0 * std::hypot(top.se_hits, oracle.se_hits));
  EXPECT_GT(oracle.mean_hits, random.mean_hits);
}

TEST(RunExperiment, SelectedHitRateRespectsEnrichmentBound) {
  const auto model = normal_model(0.01, 0.1);
  const Budgets budgets{10000, 100};
  const VerificationChannel channel(0.1);
  const auto top =
      run_experiment(model, Policy::kTopB, budgets, channel, 200, 41);
  const double j = screening_information(model);
  const double bound = enrichment_bound(model.p(), j, budgets.alpha());
  const double rate_se = top.se_hits / static_cast<double>(budgets.b);
  EXPECT_LE(top.mean_selected_hit_rate, bound + 3.0 * rate_se);
  // The rate should be visibly enriched over the base rate as well.
  EXPECT_GT(top.mean_selected_hit_rate, model.p());
}

TEST(EmpiricalLoglossGain, NoiselessChannelRecoversHitsExactly) {
  const auto model = normal_model(0.05, 0.2);
  const Budgets budgets{1000, 50};
  const VerificationChannel channel(0.0);
  const auto played = empirical_logloss_gain(model, Policy::kTopB, budgets,
                                             channel, 64, 51);
  EXPECT_DOUBLE_EQ(played.mean_gain_bits, played.mean_hits);
}

TEST(EmpiricalLoglossGain, MatchesHitIdentityWithinNoise) {
  const auto model = normal_model(0.05, 0.2);
  const Budgets budgets{2000, 100};
  const VerificationChannel channel(0.1);
  const auto identity = run_experiment(model, Policy::kTopB, budgets, channel,
                                       300, 61, /*threads=*/2);
  const auto played = empirical_logloss_gain(model, Policy::kTopB, budgets,
                                             channel, 300, 61, /*threads=*/2);
  // Same seeds, same windows and selections; only the channel playout
  // differs.
  EXPECT_EQ(identity.mean_hits, played.mean_hits);
  const double se = std::hypot(identity.se_gain_bits, played.se_gain_bits);
  EXPECT_NEAR(played.mean_gain_bits, identity.mean_gain_bits, 3.0 * se);
  EXPECT_GT(played.se_gain_bits, 0.0);
}

TEST(EmpiricalLoglossGain, PerHitGainConvergesToChannelInformation) {
  // Force every verified record to be a hit, so the per-record gain is a
  // clean sample of 1 - h2-style channel loss.
  const auto model = normal_model(0.999, 0.0);
  const Budgets budgets{4000, 250};
  const VerificationChannel channel(0.1);
  const auto played = empirical_logloss_gain(model, Policy::kOracleB, budgets,
                                             channel, 100, 71);
  const double per_hit = played.mean_gain_bits / played.mean_hits;
  const double se = played.se_gain_bits / played.mean_hits;
  EXPECT_NEAR(per_hit, channel.information(), 4.0 * se);
}

}  // namespace
}  // namespace haystack
