// Samples one window of records and shows what the cheap score buys:
// the relevance rate among top-ranked records against the base rate, next
// to the information-theoretic enrichment ceiling.

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <vector>

#include "haystack/bounds.hpp"
#include "haystack/screening.hpp"
#include "haystack/tails.hpp"

int main() {
  using namespace haystack;

  const ScreeningModel model(0.05, 0.5, ScoreDistribution::standard_normal());
  const std::size_t k = 200000;
  const WindowSample window = sample_window(model, k, 2026);

  const double base = marginal_rate(model);
  const double j = screening_information(model);
  std::printf("p = %.3g   epsilon = %.3g\n", model.p(), model.epsilon());
  std::printf("marginal relevance rate = %.5f\n", base);
  std::printf("screening information J = %.6g bits   auc = %.4f\n\n", j,
              screening_auc(model));

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return window.eta[a] > window.eta[b];
  });

  std::printf("%10s %14s %14s %14s\n", "alpha", "top rate", "bound",
              "lift");
  for (const double alpha : {0.001, 0.01, 0.1, 0.5}) {
    const auto take = static_cast<std::size_t>(alpha * static_cast<double>(k));
    double hits = 0.0;
    for (std::size_t i = 0; i < take; ++i) hits += window.t[order[i]];
    const double rate = hits / static_cast<double>(take);
    const double bound = enrichment_bound(model.p(), j, alpha);
    std::printf("%10.3f %14.5f %14.5f %13.1fx\n", alpha, rate, bound,
                rate / base);
  }
  return 0;
}
