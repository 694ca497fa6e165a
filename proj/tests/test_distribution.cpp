#include "haystack/distribution.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "haystack/rng.hpp"

namespace haystack {
namespace {

TEST(ScoreDistribution, NormalDelegatesToScalarKernels) {
  const auto dist = ScoreDistribution::standard_normal();
  EXPECT_EQ(dist.family(), ScoreFamily::kNormal);
  EXPECT_DOUBLE_EQ(dist.cdf(0.0), 0.5);
  EXPECT_NEAR(dist.quantile(0.975), 1.959963984540054, 2e-15);
  EXPECT_EQ(dist.label(), "normal");
  EXPECT_THROW(dist.pareto_shape(), std::logic_error);
  EXPECT_THROW(dist.pareto_sigma(), std::logic_error);
}

TEST(ScoreDistribution, ParetoMoments) {
  const auto dist = ScoreDistribution::standardized_pareto(4.0);
  EXPECT_DOUBLE_EQ(dist.pareto_shape(), 4.0);
  EXPECT_NEAR(dist.pareto_mu(), 4.0 / 3.0, 1e-15);
  // sigma^2 = nu / ((nu-1)^2 (nu-2)).
  EXPECT_NEAR(dist.pareto_sigma(), 0.47140452079103168, 1e-15);
  const auto five = ScoreDistribution::standardized_pareto(5.0);
  EXPECT_NEAR(five.pareto_sigma(), std::sqrt(5.0 / 48.0), 1e-15);
  EXPECT_EQ(dist.label(), "pareto(nu=4)");
}

TEST(ScoreDistribution, ParetoShapeDomain) {
  EXPECT_THROW(ScoreDistribution::standardized_pareto(3.0), std::invalid_argument);
  EXPECT_THROW(ScoreDistribution::standardized_pareto(2.5), std::invalid_argument);
  EXPECT_NO_THROW(ScoreDistribution::standardized_pareto(3.01));
}

TEST(ScoreDistribution, ParetoQuantileAndCdfInverse) {
  const auto dist = ScoreDistribution::standardized_pareto(4.0);
  // u = 0.99: raw X = 100^(1/4) = sqrt(10).
  EXPECT_NEAR(dist.quantile(0.99), 3.8797768077531796, 1e-14);
  for (double u : {1e-8, 1e-3, 0.1, 0.5, 0.9, 0.999, 1.0 - 1e-9}) {
    EXPECT_NEAR(dist.cdf(dist.quantile(u)), u, 1e-12) << u;
  }
  // Left edge of the support maps to cdf zero.
  const double left = (1.0 - dist.pareto_mu()) / dist.pareto_sigma();
  EXPECT_DOUBLE_EQ(dist.cdf(left), 0.0);
  EXPECT_DOUBLE_EQ(dist.cdf(left - 1.0), 0.0);
  EXPECT_THROW(dist.quantile(0.0), std::invalid_argument);
  EXPECT_THROW(dist.quantile(1.0), std::invalid_argument);
}

TEST(ScoreDistribution, SampleMomentsAreStandardized) {
  for (const auto& dist : {ScoreDistribution::standard_normal(),
                           ScoreDistribution::standardized_pareto(4.0)}) {
    RngStream stream(derive_seed(99, 0));
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = dist.sample(stream);
      s1 += g;
      s2 += g * g;
    }
    // nu = 4 has infinite kurtosis, so the variance estimate converges
    // slowly; bounds are deliberately loose.
    EXPECT_NEAR(s1 / n, 0.0, 0.02) << dist.label();
    EXPECT_NEAR(s2 / n, 1.0, 0.1) << dist.label();
  }
}

TEST(ScoreDistribution, SampleConsumesOneUniformPerDraw) {
  for (const auto& dist : {ScoreDistribution::standard_normal(),
                           ScoreDistribution::standardized_pareto(4.0)}) {
    RngStream a(derive_seed(7, 1)), b(derive_seed(7, 1));
    dist.sample(a);
    b.uniform();
    EXPECT_DOUBLE_EQ(a.uniform(), b.uniform()) << dist.label();
  }
}

}  // namespace
}  // namespace haystack
