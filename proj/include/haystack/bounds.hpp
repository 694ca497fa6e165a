#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "haystack/math.hpp"

namespace haystack {

/// Largest slope constant admitted by the square-root law, sqrt(ln2 / 2).
inline const double kMaxScoreConstant = std::sqrt(std::numbers::ln2 / 2.0);

/// Screening and verification budgets: K records inspected, B of them
/// verified.
struct Budgets {
  std::int64_t k = 0;
  std::int64_t b = 0;

  double alpha() const { return static_cast<double>(b) / static_cast<double>(k); }

  void validate() const {
    if (k < 1 || b < 0 || b > k) {
      throw std::invalid_argument("Budgets: need 1 <= K and 0 <= B <= K");
    }
  }
};

/// Information-theoretic inputs of the closed-form limits, all in bits.
struct InfoParams {
  double p = 0.0;                 // base relevance rate
  double screening_info = 0.0;    // bits the score carries per record
  double verification_info = 0.0; // bits one verification yields on a hit
  double claim_entropy = 1.0;     // per-claim entropy of the target

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("InfoParams: p must lie strictly in (0,1)");
    }
    if (screening_info < 0.0 || verification_info < 0.0 || claim_entropy < 0.0) {
      throw std::invalid_argument("InfoParams: information terms must be nonnegative");
    }
    if (verification_info > claim_entropy) {
      throw std::invalid_argument(
          "InfoParams: verification cannot reveal more than the claim holds");
    }
  }
};

/// Everything the bound sweep reports for one (K, B) point.
struct BoundReport {
  double gain_converse = 0.0;
  double gain_achievable = 0.0;
  double gain_random = 0.0;
  double gain_oracle_ceiling = 0.0;
  std::optional<double> required_b;
};

/// Upper bound on the selected-set relevance rate:
/// P(T=1 | selected) <= p + sqrt(ln2 J / (2 alpha)), clamped to 1.
inline double enrichment_bound(double p, double screening_info, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("enrichment_bound: alpha must lie in (0,1]");
  }
  if (screening_info < 0.0) {
    throw std::invalid_argument("enrichment_bound: information must be nonnegative");
  }
  const double lift = std::sqrt(std::numbers::ln2 * screening_info / (2.0 * alpha));
  return std::min(1.0, p + lift);
}

/// Converse: no policy beats
///   I_ver (B p + sqrt((ln2/2) J K B))
/// bits of gain.  Continuous in B so required_budget can invert it exactly.
inline double converse_gain(const InfoParams& params, double k, double b) {
  if (!(k >= 1.0) || b < 0.0 || b > k) {
    throw std::invalid_argument("converse_gain: need 1 <= K and 0 <= B <= K");
  }
  if (b == 0.0) {
    return 0.0;
  }
  const double root =
      std::sqrt(0.5 * std::numbers::ln2 * params.screening_info * k * b);
  return params.verification_info * (b * params.p + root);
}

inline double converse_gain(const InfoParams& params, const Budgets& budgets) {
  budgets.validate();
  return converse_gain(params, static_cast<double>(budgets.k),
                       static_cast<double>(budgets.b));
}

/// Smallest continuous B whose converse gain reaches delta_gain:
///   (1/(4p^2)) (sqrt(a^2 + x) - a)^2,  a^2 = (ln2/2) J K,  x = 4 p delta / I_ver.
/// Evaluated as (x / (sqrt(a^2+x) + a))^2 / (4p^2), which keeps full relative
/// precision when x << a^2 and the naive difference would cancel.
inline double required_budget(const InfoParams& params, double k,
                              double delta_gain) {
  if (!(k >= 1.0)) {
    throw std::invalid_argument("required_budget: need K >= 1");
  }
  if (!(params.p > 0.0)) {
    throw std::invalid_argument("required_budget: need p > 0");
  }
  if (delta_gain <= 0.0) {
    return 0.0;
  }
  if (params.verification_info == 0.0) {
    throw std::domain_error("required_budget: target unreachable without verification information");
  }
  const double a_sq = 0.5 * std::numbers::ln2 * params.screening_info * k;
  const double a = std::sqrt(a_sq);
  const double x = 4.0 * params.p * delta_gain / params.verification_info;
  const double diff = x / (std::sqrt(a_sq + x) + a);
  return diff * diff / (4.0 * params.p * params.p);
}

/// Constant of the score-based achievability curve,
///   c_G(p, alpha) = sqrt(2 ln2 p (1-p) alpha) m_G(alpha),
/// never above kMaxScoreConstant for a standardized score law.
inline double score_constant(double p, double alpha, double m_g_alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("score_constant: alpha must lie in (0,1]");
  }
  return std::sqrt(2.0 * std::numbers::ln2 * p * (1.0 - p) * alpha) * m_g_alpha;
}

/// Gain the rank-by-score policy provably reaches in the weak-screening
/// regime: I_ver (B p + c_G sqrt(J K B)).  m_g_alpha is the upper
/// alpha-tail mean of the score law at alpha = B/K, from the tails module.
/// No entropy ceiling is applied here; with decoupled claims it never binds.
inline double achievable_gain_weak(const InfoParams& params,
                                   const Budgets& budgets, double m_g_alpha) {
  budgets.validate();
  if (budgets.b == 0) {
    return 0.0;
  }
  const double c = score_constant(params.p, budgets.alpha(), m_g_alpha);
  const double b = static_cast<double>(budgets.b);
  const double root = std::sqrt(params.screening_info *
                                static_cast<double>(budgets.k) * b);
  return params.verification_info * (b * params.p + c * root);
}

/// Same curve with the whole-target entropy ceiling applied, for reporting
/// against a single global claim rather than decoupled per-record claims.
inline double achievable_gain_global(const InfoParams& params,
                                     const Budgets& budgets, double m_g_alpha) {
  return std::min(achievable_gain_weak(params, budgets, m_g_alpha),
                  params.claim_entropy);
}

/// E[min(b, X)] for X ~ Binomial(k, rate), summed as sum_{j<b} P(X > j) with
/// log-space terms; exact up to rounding for the budgets used here.
inline double expected_min_binomial(std::int64_t k, double rate,
                                    std::int64_t b) {
  if (k < 1 || b < 0) {
    throw std::invalid_argument("expected_min_binomial: need K >= 1 and B >= 0");
  }
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("expected_min_binomial: rate must lie in [0,1]");
  }
  if (b == 0 || rate == 0.0) {
    return 0.0;
  }
  const double kd = static_cast<double>(k);
  if (b >= k) {
    return kd * rate;  // min never binds; plain binomial mean
  }
  if (rate == 1.0) {
    return static_cast<double>(b);
  }
  const double log_p = std::log(rate);
  const double log_q = std::log1p(-rate);
  const double log_choose_base = std::lgamma(kd + 1.0);
  double cdf = 0.0;
  double expectation = 0.0;
  for (std::int64_t j = 0; j < b; ++j) {
    const double jd = static_cast<double>(j);
    const double log_pmf = log_choose_base - std::lgamma(jd + 1.0) -
                           std::lgamma(kd - jd + 1.0) + jd * log_p +
                           (kd - jd) * log_q;
    cdf += std::exp(log_pmf);
    expectation += std::max(0.0, 1.0 - cdf);  // P(X > j)
  }
  return expectation;
}

/// Finite-pool oracle: a selector that knows the relevance bits cannot gain
/// more than I_ver E[min(B, #relevant)].  expected_informative is that
/// expectation, from expected_min_binomial or the caller's own estimate.
inline double oracle_ceiling(const InfoParams& params, const Budgets& budgets,
                             double expected_informative) {
  budgets.validate();
  if (expected_informative < 0.0) {
    throw std::invalid_argument("oracle_ceiling: expectation must be nonnegative");
  }
  return params.verification_info * expected_informative;
}

/// Budget where the square-root curve meets the unit-slope ceiling:
/// p + c sqrt(JK/B) = 1 at B* = (c sqrt(JK) / (1-p))^2.
inline double sqrt_law_breakpoint(double p, double jk, double c) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("sqrt_law_breakpoint: c must be positive");
  }
  const double root = c * std::sqrt(jk) / (1.0 - p);
  return root * root;
}

/// The square-root scaling law over a budget grid:
///   min(I_ver B, I_ver B (p + c sqrt(JK/B))),
/// the clipped two-regime curve with unit slope below the breakpoint.
/// c = kMaxScoreConstant reproduces converse_gain before clipping.
inline std::vector<double> sqrt_law_curve(const InfoParams& params, double k,
                                          std::span<const std::int64_t> b_grid,
                                          double c) {
  if (!(c > 0.0 && c <= kMaxScoreConstant)) {
    throw std::invalid_argument(
        "sqrt_law_curve: c must lie in (0, sqrt(ln2/2)]");
  }
  const double jk = params.screening_info * k;
  std::vector<double> out;
  out.reserve(b_grid.size());
  for (const std::int64_t b : b_grid) {
    if (b < 0) {
      throw std::invalid_argument("sqrt_law_curve: budgets must be nonnegative");
    }
    const double bd = static_cast<double>(b);
    if (b == 0) {
      out.push_back(0.0);
      continue;
    }
    const double sloped = bd * (params.p + c * std::sqrt(jk / bd));
    out.push_back(params.verification_info * std::min(bd, sloped));
  }
  return out;
}

}  // namespace haystack
