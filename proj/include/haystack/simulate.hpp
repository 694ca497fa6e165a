#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "haystack/bounds.hpp"
#include "haystack/math.hpp"
#include "haystack/rng.hpp"
#include "haystack/screening.hpp"

namespace haystack {

enum class Policy { kTopB, kRandomB, kOracleB };

inline std::string policy_label(Policy policy) {
  switch (policy) {
    case Policy::kTopB:
      return "TopB";
    case Policy::kRandomB:
      return "RandomB";
    case Policy::kOracleB:
      return "OracleB";
  }
  throw std::logic_error("policy_label: unknown policy");
}

/// Binary symmetric verification channel over a uniform binary claim.
/// A verified relevant record reveals 1 - h2(rho) bits; an irrelevant one
/// reveals nothing.
class VerificationChannel {
 public:
  explicit VerificationChannel(double rho) : rho_(rho) {
    if (!(rho >= 0.0 && rho < 0.5)) {
      throw std::invalid_argument("VerificationChannel: crossover must lie in [0, 0.5)");
    }
  }

  double rho() const { return rho_; }
  double information() const { return 1.0 - binary_entropy(rho_); }
  static constexpr double claim_entropy() { return 1.0; }

 private:
  double rho_;
};

/// Indices a policy verifies, exactly min(B, K) of them.
///   TopB:    the B largest eta values, ties to the lowest index; returned
///            ascending.
///   RandomB: uniform without replacement from the seed; returned ascending.
///   OracleB: relevant records in index order, padded with irrelevant ones in
///            index order when fewer than B are relevant; returned in that
///            construction order.
inline std::vector<std::int64_t> select_indices(Policy policy,
                                                const WindowSample& window,
                                                std::int64_t b,
                                                std::uint64_t seed) {
  const std::int64_t k = static_cast<std::int64_t>(window.eta.size());
  if (b < 0 || b > k) {
    throw std::invalid_argument("select_indices: need 0 <= B <= K");
  }
  std::vector<std::int64_t> selected;
  if (b == 0) {
    return selected;
  }
  switch (policy) {
    case Policy::kTopB: {
      std::vector<std::int64_t> order(k);
      std::iota(order.begin(), order.end(), 0);
      auto ranks_before = [&](std::int64_t i, std::int64_t j) {
        if (window.eta[i] != window.eta[j]) {
          return window.eta[i] > window.eta[j];
        }
        return i < j;
      };
      std::nth_element(order.begin(), order.begin() + (b - 1), order.end(),
                       ranks_before);
      selected.assign(order.begin(), order.begin() + b);
      std::sort(selected.begin(), selected.end());
      break;
    }
    case Policy::kRandomB: {
      RngStream stream(seed);
      std::vector<std::int64_t> pool(k);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::int64_t i = 0; i < b; ++i) {
        // uniform() < 1 strictly, so the offset stays within the pool.
        const auto j =
            i + static_cast<std::int64_t>(stream.uniform() * static_cast<double>(k - i));
        std::swap(pool[i], pool[j]);
      }
      selected.assign(pool.begin(), pool.begin() + b);
      std::sort(selected.begin(), selected.end());
      break;
    }
    case Policy::kOracleB: {
      selected.reserve(b);
      for (std::int64_t i = 0; i < k && std::ssize(selected) < b; ++i) {
        if (window.t[i]) {
          selected.push_back(i);
        }
      }
      for (std::int64_t i = 0; i < k && std::ssize(selected) < b; ++i) {
        if (!window.t[i]) {
          selected.push_back(i);
        }
      }
      break;
    }
  }
  return selected;
}

struct SimResult {
  double mean_hits = 0.0;
  double se_hits = 0.0;
  double mean_gain_bits = 0.0;
  double se_gain_bits = 0.0;
  double mean_selected_hit_rate = 0.0;
  std::int64_t replications = 0;
};

namespace detail {

/// Runs fn(r) for r in [0, total) over contiguous chunks, one thread each.
/// Callers write into preallocated slots, so the aggregation that follows is
/// independent of the thread count.
template <typename Fn>
void for_each_replication(std::int64_t total, int threads, Fn&& fn) {
  if (threads <= 1 || total < 2) {
    for (std::int64_t r = 0; r < total; ++r) {
      fn(r);
    }
    return;
  }
  const int worker_count = static_cast<int>(
      std::min<std::int64_t>(threads, total));
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) {
    const std::int64_t begin = total * w / worker_count;
    const std::int64_t end = total * (w + 1) / worker_count;
    workers.emplace_back([begin, end, &fn] {
      for (std::int64_t r = begin; r < end; ++r) {
        fn(r);
      }
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }
}

inline SimResult aggregate_replications(const std::vector<double>& hits,
                                        const std::vector<double>& gains,
                                        std::int64_t b) {
  SimResult result;
  result.replications = static_cast<std::int64_t>(hits.size());
  result.mean_hits = mean_of(hits);
  result.se_hits = standard_error_of_mean(hits, result.mean_hits);
  result.mean_gain_bits = mean_of(gains);
  result.se_gain_bits = standard_error_of_mean(gains, result.mean_gain_bits);
  result.mean_selected_hit_rate =
      b > 0 ? result.mean_hits / static_cast<double>(b) : 0.0;
  return result;
}

}  // namespace detail

/// Replication r uses derive_seed(master_seed, r); within a replication,
/// stream 0 draws scores, stream 1 relevance bits, stream 2 policy
/// randomness, stream 3 the verification channel.  Identical inputs give a
/// bit-identical result at any thread count.
inline SimResult run_experiment(const ScreeningModel& model, Policy policy,
                                const Budgets& budgets,
                                const VerificationChannel& channel,
                                std::int64_t replications,
                                std::uint64_t master_seed, int threads = 1) {
  budgets.validate();
  if (replications < 2) {
    throw std::invalid_argument("run_experiment: need at least 2 replications");
  }
  const double info = channel.information();
  std::vector<double> hits(replications);
  std::vector<double> gains(replications);
  detail::for_each_replication(replications, threads, [&](std::int64_t r) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(r));
    const WindowSample window =
        sample_window(model, static_cast<std::size_t>(budgets.k), seed);
    const auto selected =
        select_indices(policy, window, budgets.b, derive_seed(seed, 2));
    std::int64_t hit_count = 0;
    for (const std::int64_t i : selected) {
      hit_count += window.t[i];
    }
    hits[r] = static_cast<double>(hit_count);
    gains[r] = info * hits[r];
  });
  return detail::aggregate_replications(hits, gains, budgets.b);
}

/// Plays the verification channel out explicitly instead of using the
/// hit-count identity: per verified record, a uniform claim bit; a noisy
/// observation when the record is relevant and no observation otherwise; the
/// realized log-loss of the Bayes posterior.  Gain per record is one bit
/// minus that loss.  Stream 3 interleaves claim and channel draws in
/// selection order.
inline SimResult empirical_logloss_gain(const ScreeningModel& model,
                                        Policy policy, const Budgets& budgets,
                                        const VerificationChannel& channel,
                                        std::int64_t replications,
                                        std::uint64_t master_seed,
                                        int threads = 1) {
  budgets.validate();
  if (replications < 2) {
    throw std::invalid_argument("empirical_logloss_gain: need at least 2 replications");
  }
  const double rho = channel.rho();
  std::vector<double> hits(replications);
  std::vector<double> gains(replications);
  detail::for_each_replication(replications, threads, [&](std::int64_t r) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(r));
    const WindowSample window =
        sample_window(model, static_cast<std::size_t>(budgets.k), seed);
    const auto selected =
        select_indices(policy, window, budgets.b, derive_seed(seed, 2));
    RngStream channel_stream(derive_seed(seed, 3));
    std::int64_t hit_count = 0;
    double gain = 0.0;
    for (const std::int64_t i : selected) {
      const bool claim = channel_stream.bernoulli(0.5);
      if (window.t[i]) {
        ++hit_count;
        const bool observed = claim != channel_stream.bernoulli(rho);
        // Bayes posterior puts mass 1-rho on the observed symbol.
        const double posterior_on_truth = observed == claim ? 1.0 - rho : rho;
        gain += 1.0 + std::log2(posterior_on_truth);
      }
      // Irrelevant record: no observation, the posterior stays uniform, the
      // loss is exactly one bit and the gain contribution zero.
    }
    hits[r] = static_cast<double>(hit_count);
    gains[r] = gain;
  });
  return detail::aggregate_replications(hits, gains, budgets.b);
}

}  // namespace haystack
