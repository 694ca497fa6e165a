#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "haystack/math.hpp"
#include "haystack/quadrature.hpp"
#include "haystack/rng.hpp"
#include "haystack/screening.hpp"
#include "haystack/simulate.hpp"
#include "haystack/tails.hpp"

namespace haystack {

struct TopSumEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte Carlo estimate of E[sum of the B largest of K i.i.d. eta draws].
/// Replication r draws its scores from stream 0 of derive_seed(seed, r),
/// the same stream run_experiment uses, so the two estimates couple.
inline TopSumEstimate expected_top_b_sum(const ScreeningModel& model,
                                         std::int64_t k, std::int64_t b,
                                         std::int64_t replications,
                                         std::uint64_t seed, int threads = 1) {
  if (k < 1 || b < 1 || b > k) {
    throw std::invalid_argument("expected_top_b_sum: need 1 <= B <= K");
  }
  if (replications < 2) {
    throw std::invalid_argument("expected_top_b_sum: need at least 2 replications");
  }
  std::vector<double> sums(replications);
  detail::for_each_replication(replications, threads, [&](std::int64_t r) {
    const std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    RngStream score_stream(derive_seed(rep_seed, 0));
    std::vector<double> eta(static_cast<std::size_t>(k));
    for (auto& value : eta) {
      value = model.eta(model.score_law().sample(score_stream));
    }
    std::nth_element(eta.begin(), eta.begin() + (b - 1), eta.end(),
                     std::greater<>());
    std::vector<double> top(eta.begin(), eta.begin() + b);
    sums[r] = pairwise_sum(top);
  });
  TopSumEstimate out;
  out.mean = mean_of(sums);
  out.se = standard_error_of_mean(sums, out.mean);
  return out;
}

/// Exact finite-block boundary of the solved benchmark at budgets (K, B):
/// the best reachable risk per verified record and the matching total gain.
struct BenchmarkBoundary {
  std::int64_t k = 0;
  std::int64_t b = 0;
  double expected_top_sum = 0.0;
  double expected_top_sum_se = 0.0;
  double risk_bits = 0.0;  // per verified record
  double gain_bits = 0.0;  // whole window
};

inline BenchmarkBoundary benchmark_risk(const ScreeningModel& model,
                                        std::int64_t k, std::int64_t b,
                                        const VerificationChannel& channel,
                                        std::int64_t replications,
                                        std::uint64_t seed, int threads = 1) {
  const auto top = expected_top_b_sum(model, k, b, replications, seed, threads);
  const double info = channel.information();
  BenchmarkBoundary boundary;
  boundary.k = k;
  boundary.b = b;
  boundary.expected_top_sum = top.mean;
  boundary.expected_top_sum_se = top.se;
  boundary.risk_bits = VerificationChannel::claim_entropy() -
                       info * top.mean / static_cast<double>(b);
  boundary.gain_bits = info * top.mean;
  return boundary;
}

/// K -> infinity limit of (1/K) E[sum of top-B eta] at fixed alpha = B/K:
///   integral of Q_eta(u) over u in (1-alpha, 1),
/// where Q_eta(u) = eta(Q_G(u)) because eta increases in g.  Parametrized by
/// the upper-tail mass w = 1-u = alpha v, which both puts the fast variation
/// at a plain endpoint and keeps w exact: forming 1 - alpha v instead would
/// quantize the tail to the ulp spacing at 1 and hand the quadrature a
/// staircase to resolve.
inline double single_letter_top_fraction(const ScreeningModel& model,
                                         double alpha,
                                         double quad_tol = 1e-12) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(
        "single_letter_top_fraction: alpha must lie in (0,1]");
  }
  if (model.epsilon() == 0.0) {
    return alpha * model.p();
  }
  const auto& law = model.score_law();
  // The floor keeps alpha v from underflowing to an exact zero; eta is
  // bounded, so the sliver it perturbs carries no weight.
  const auto result = integrate_adaptive(
      [&](double v) {
        const double w = std::max(alpha * v, 1e-310);
        return model.eta(law.quantile_upper(w));
      },
      0.0, 1.0, quad_tol, 60);
  if (!(result.error_estimate <= 1e4 * quad_tol)) {
    throw QuadratureError(
        "single_letter_top_fraction: quadrature failed to certify the tolerance",
        result.error_estimate);
  }
  return alpha * result.value;
}

/// Exhaustively confirms that no size-B subset of the given rates beats the
/// top-B subset's sum.  Enumerates all C(K,B) subsets, so K is capped small.
inline bool brute_force_selection_check(const std::vector<double>& etas,
                                        std::int64_t b) {
  const auto k = static_cast<std::int64_t>(etas.size());
  if (k < 1 || k > 12) {
    throw std::invalid_argument("brute_force_selection_check: need 1 <= K <= 12");
  }
  if (b < 1 || b > k) {
    throw std::invalid_argument("brute_force_selection_check: need 1 <= B <= K");
  }
  std::vector<double> sorted = etas;
  std::nth_element(sorted.begin(), sorted.begin() + (b - 1), sorted.end(),
                   std::greater<>());
  double top_sum = 0.0;
  for (std::int64_t i = 0; i < b; ++i) {
    top_sum += sorted[i];
  }
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) != static_cast<int>(b)) {
      continue;
    }
    double sum = 0.0;
    for (std::int64_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        sum += etas[i];
      }
    }
    if (sum > top_sum + 1e-12) {
      return false;
    }
  }
  return true;
}

}  // namespace haystack
