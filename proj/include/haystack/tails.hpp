#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "haystack/distribution.hpp"
#include "haystack/math.hpp"

namespace haystack {

/// Mean of the b largest entries.  Ties are broken arbitrarily; any maximal
/// set of b entries has the same mean.
inline double empirical_tail_mean(std::span<const double> values,
                                  std::size_t b) {
  if (b == 0 || b > values.size()) {
    throw std::invalid_argument("empirical_tail_mean: need 0 < b <= size");
  }
  std::vector<double> work(values.begin(), values.end());
  std::nth_element(work.begin(), work.begin() + (b - 1), work.end(),
                   std::greater<>());
  std::vector<double> top(work.begin(), work.begin() + b);
  return mean_of(top);
}

struct TailMeanEstimate {
  double mean = 0.0;
  /// Standard error from the sample variance of the selected top set.  For
  /// heavy-tailed laws this is the honest per-estimate uncertainty; there is
  /// no population variance to plug in.
  double se = 0.0;
};

inline TailMeanEstimate empirical_tail_mean_with_se(
    std::span<const double> values, std::size_t b) {
  if (b == 0 || b > values.size()) {
    throw std::invalid_argument("empirical_tail_mean_with_se: need 0 < b <= size");
  }
  std::vector<double> work(values.begin(), values.end());
  std::nth_element(work.begin(), work.begin() + (b - 1), work.end(),
                   std::greater<>());
  std::vector<double> top(work.begin(), work.begin() + b);
  TailMeanEstimate out;
  out.mean = mean_of(top);
  out.se = standard_error_of_mean(top, out.mean);
  return out;
}

/// E[G | G in its upper alpha-tail] for the standard normal:
/// phi(Phi^-1(1 - alpha)) / alpha.
inline double gaussian_tail_mean(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("gaussian_tail_mean: alpha must lie in (0,1]");
  }
  if (alpha == 1.0) {
    return 0.0;
  }
  return normal_pdf(normal_quantile(1.0 - alpha)) / alpha;
}

/// Leading-order form sqrt(2 ln(1/alpha)); relative error vanishes only
/// logarithmically, so the exact form is preferred everywhere it is finite.
inline double gaussian_tail_mean_asymptotic(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(
        "gaussian_tail_mean_asymptotic: alpha must lie in (0,1]");
  }
  return std::sqrt(2.0 * std::log(1.0 / alpha));
}

/// Upper alpha-tail mean of the standardized Pareto with shape nu:
/// (mu / sigma) (alpha^(-1/nu) - 1), polynomial in 1/alpha unlike the
/// normal's logarithmic growth.
inline double pareto_tail_mean(double nu, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("pareto_tail_mean: alpha must lie in (0,1]");
  }
  const auto law = ScoreDistribution::standardized_pareto(nu);
  return law.pareto_mu() / law.pareto_sigma() *
         (std::pow(alpha, -1.0 / nu) - 1.0);
}

inline double pareto_tail_mean_asymptotic(double nu, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(
        "pareto_tail_mean_asymptotic: alpha must lie in (0,1]");
  }
  const auto law = ScoreDistribution::standardized_pareto(nu);
  return law.pareto_mu() / law.pareto_sigma() * std::pow(alpha, -1.0 / nu);
}

inline double tail_mean(const ScoreDistribution& law, double alpha) {
  if (law.family() == ScoreFamily::kNormal) {
    return gaussian_tail_mean(alpha);
  }
  return pareto_tail_mean(law.pareto_shape(), alpha);
}

inline double tail_mean_asymptotic(const ScoreDistribution& law, double alpha) {
  if (law.family() == ScoreFamily::kNormal) {
    return gaussian_tail_mean_asymptotic(alpha);
  }
  return pareto_tail_mean_asymptotic(law.pareto_shape(), alpha);
}

}  // namespace haystack
