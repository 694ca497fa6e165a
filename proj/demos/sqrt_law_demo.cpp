// Prints the gain ledger for one model across a budget sweep: the random
// and clairvoyant baselines, the square-root-law prediction, the exact
// boundary estimate, and what the rank-by-score policy actually earns.

#include <cstdio>

#include "haystack/benchmark.hpp"
#include "haystack/bounds.hpp"
#include "haystack/screening.hpp"
#include "haystack/simulate.hpp"
#include "haystack/tails.hpp"

int main() {
  using namespace haystack;

  const ScreeningModel model(0.01, 0.1, ScoreDistribution::standard_normal());
  const VerificationChannel channel(0.1);
  const std::int64_t k = 10000;
  const std::int64_t replications = 200;
  const std::uint64_t seed = 7;

  const InfoParams params{model.p(), screening_information(model),
                          channel.information(),
                          VerificationChannel::claim_entropy()};
  std::printf("p = %.3g   epsilon = %.3g   rho = %.3g\n", model.p(),
              model.epsilon(), channel.rho());
  std::printf("screening information J = %.6g bits\n", params.screening_info);
  std::printf("verification yield I_ver = %.6g bits\n\n",
              params.verification_info);

  std::printf("%8s %12s %12s %12s %12s %12s\n", "B", "random", "sqrt_law",
              "boundary", "simulated", "converse");
  for (const std::int64_t b : {10L, 30L, 100L, 300L, 1000L}) {
    const Budgets budgets{k, b};
    const double random = params.verification_info *
                          static_cast<double>(b) * marginal_rate(model);
    const double weak = achievable_gain_weak(
        params, budgets, tail_mean(model.score_law(), budgets.alpha()));
    const BenchmarkBoundary boundary =
        benchmark_risk(model, k, b, channel, replications, seed);
    const SimResult sim = run_experiment(model, Policy::kTopB, budgets,
                                         channel, replications, seed);
    std::printf("%8lld %12.4f %12.4f %12.4f %12.4f %12.4f\n",
                static_cast<long long>(b), random, weak, boundary.gain_bits,
                sim.mean_gain_bits, converse_gain(params, budgets));
  }

  const double jk = params.screening_info * static_cast<double>(k);
  std::printf("\nbreakpoint B* = %.4g (J*K = %.4g, c = %.4g)\n",
              sqrt_law_breakpoint(model.p(), jk, kMaxScoreConstant), jk,
              kMaxScoreConstant);
  return 0;
}
