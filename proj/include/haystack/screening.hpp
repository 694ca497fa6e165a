#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "haystack/distribution.hpp"
#include "haystack/math.hpp"
#include "haystack/quadrature.hpp"
#include "haystack/rng.hpp"

namespace haystack {

/// Population of screened records.  Each record carries a latent score g and
/// a relevance bit t; conditionally on g the bit is Bernoulli with rate
/// eta(g) = logistic(logit(p) + epsilon g).  epsilon = 0 recovers blind
/// screening where the score carries no information about t.
class ScreeningModel {
 public:
  ScreeningModel(double p, double epsilon, ScoreDistribution score_law)
      : p_(p),
        epsilon_(epsilon),
        shift_(logit(p)),
        score_law_(std::move(score_law)) {
    if (!(epsilon >= 0.0)) {
      throw std::invalid_argument("ScreeningModel: epsilon must be nonnegative");
    }
  }

  double p() const { return p_; }
  double epsilon() const { return epsilon_; }
  const ScoreDistribution& score_law() const { return score_law_; }

  double eta_logit(double g) const { return shift_ + epsilon_ * g; }
  double eta(double g) const { return logistic(eta_logit(g)); }

 private:
  double p_;
  double epsilon_;
  double shift_;
  ScoreDistribution score_law_;
};

namespace detail {

/// E[f(G)] under the model's score law.  Pareto expectations go through the
/// quantile substitution on the unit interval, normal ones through
/// Gauss-Hermite.
template <typename F>
double expect_over_scores(const ScoreDistribution& law, F&& f) {
  if (law.family() == ScoreFamily::kNormal) {
    return expect_normal(f).value;
  }
  // Quantile substitution, split at the median so each tail is reached
  // through its own well-conditioned parametrization: 1 - u near u = 1 is
  // ulp-quantized, and a staircase integrand stalls the adaptive rule.
  const double lower =
      integrate_adaptive([&](double u) { return f(law.quantile(u)); }, 0.0,
                         0.5, 0.5e-12, 60)
          .value;
  const double upper =
      integrate_adaptive([&](double w) { return f(law.quantile_upper(w)); },
                         0.0, 0.5, 0.5e-12, 60)
          .value;
  return lower + upper;
}

}  // namespace detail

/// P(T = 1), the marginal relevance rate E[eta(G)].  Not equal to p once
/// epsilon > 0: the logistic tilt does not preserve the mean.
inline double marginal_rate(const ScreeningModel& model) {
  if (model.epsilon() == 0.0) {
    return model.p();
  }
  return detail::expect_over_scores(
      model.score_law(), [&](double g) { return model.eta(g); });
}

/// Information the score carries about the relevance bit, in bits per
/// record: the mutual information h2(E[eta]) - E[h2(eta)].
inline double screening_information(const ScreeningModel& model) {
  if (model.epsilon() == 0.0) {
    return 0.0;
  }
  const double mean_entropy = detail::expect_over_scores(
      model.score_law(),
      [&](double g) { return binary_entropy_of_logit(model.eta_logit(g)); });
  return binary_entropy(marginal_rate(model)) - mean_entropy;
}

/// Small-strength closed form p(1-p) epsilon^2 / (2 ln 2); agrees with
/// screening_information to second order in epsilon.
inline double screening_information_weak(const ScreeningModel& model) {
  const double p = model.p();
  const double e = model.epsilon();
  return p * (1.0 - p) * e * e / (2.0 * std::numbers::ln2);
}

/// Probability that a uniformly chosen relevant record outscores a uniformly
/// chosen irrelevant one: AUC of the score as a classifier of t.  With
/// m = E[eta], both orderings reduce to E[F(G) eta(G)]:
///   AUC = (E[F(G) eta(G)] - m^2/2) / (m (1 - m)).
inline double screening_auc(const ScreeningModel& model) {
  if (model.epsilon() == 0.0) {
    return 0.5;
  }
  const auto& law = model.score_law();
  double cross;
  if (law.family() == ScoreFamily::kNormal) {
    cross = expect_normal(
                [&](double g) { return normal_cdf(g) * model.eta(g); })
                .value;
  } else {
    // F(Q(u)) = u, so the cross moment is a plain unit-interval integral.
    cross = integrate_adaptive(
                [&](double u) { return u * model.eta(law.quantile(u)); }, 0.0,
                1.0, 1e-12, 60)
                .value;
  }
  const double m = marginal_rate(model);
  return (cross - 0.5 * m * m) / (m * (1.0 - m));
}

/// Inverts screening_auc in epsilon for a fixed p and score law.  AUC grows
/// monotonically from 1/2 at epsilon = 0, so an expanding bracket plus
/// bisection is enough.
inline double epsilon_for_auc(double p, double target_auc,
                              const ScoreDistribution& law) {
  if (!(target_auc >= 0.5 && target_auc < 1.0)) {
    throw std::invalid_argument("epsilon_for_auc: target must lie in [0.5, 1)");
  }
  if (target_auc == 0.5) {
    return 0.0;
  }
  auto auc_at = [&](double eps) {
    return screening_auc(ScreeningModel(p, eps, law));
  };
  double lo = 0.0;
  double hi = 1.0;
  while (auc_at(hi) < target_auc) {
    hi *= 2.0;
    if (hi > 1e6) {
      throw std::runtime_error("epsilon_for_auc: bracket expansion failed");
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (auc_at(mid) < target_auc ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// One screened window: scores, conditional rates, and relevance bits for
/// count records.  Scores come from stream 0 of the seed and bits from
/// stream 1, one draw per record in index order, so the score vector is
/// unchanged by anything that happens downstream of the bits.
struct WindowSample {
  std::vector<double> g;
  std::vector<double> eta;
  std::vector<std::uint8_t> t;
};

inline WindowSample sample_window(const ScreeningModel& model,
                                  std::size_t count, std::uint64_t seed) {
  WindowSample window;
  window.g.resize(count);
  window.eta.resize(count);
  window.t.resize(count);
  RngStream score_stream(derive_seed(seed, 0));
  for (std::size_t i = 0; i < count; ++i) {
    window.g[i] = model.score_law().sample(score_stream);
    window.eta[i] = model.eta(window.g[i]);
  }
  RngStream bit_stream(derive_seed(seed, 1));
  for (std::size_t i = 0; i < count; ++i) {
    window.t[i] = bit_stream.bernoulli(window.eta[i]) ? 1 : 0;
  }
  return window;
}

}  // namespace haystack
