#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "haystack/math.hpp"
#include "haystack/rng.hpp"

namespace haystack {

enum class ScoreFamily { kNormal, kPareto };

/// Zero-mean, unit-variance score law: the standard normal, or a standardized
/// Pareto with shape nu (raw variate X on [1, inf) with P(X > x) = x^-nu,
/// shifted and scaled to mean zero and variance one).  Shapes at or below 3
/// are rejected; the model family assumes a finite third moment.
class ScoreDistribution {
 public:
  static ScoreDistribution standard_normal() {
    return ScoreDistribution(ScoreFamily::kNormal, 0.0);
  }

  static ScoreDistribution standardized_pareto(double nu) {
    if (!(nu > 3.0)) {
      throw std::invalid_argument("standardized_pareto: shape must exceed 3");
    }
    return ScoreDistribution(ScoreFamily::kPareto, nu);
  }

  ScoreFamily family() const { return family_; }

  double pareto_shape() const {
    require_pareto();
    return nu_;
  }

  /// Mean of the raw Pareto variate, nu/(nu-1).
  double pareto_mu() const {
    require_pareto();
    return mu_;
  }

  /// Standard deviation of the raw Pareto variate.
  double pareto_sigma() const {
    require_pareto();
    return sigma_;
  }

  double quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
      throw std::invalid_argument("quantile: argument must lie strictly in (0,1)");
    }
    if (family_ == ScoreFamily::kNormal) {
      return normal_quantile(u);
    }
    return (std::pow(1.0 - u, -1.0 / nu_) - mu_) / sigma_;
  }

  /// Score at upper-tail mass w, i.e. quantile(1 - w) computed from w
  /// itself.  Forming 1 - w first quantizes tiny tail masses to the ulp
  /// spacing at 1; integrands over the extreme tail need the direct form.
  double quantile_upper(double w) const {
    if (!(w > 0.0 && w < 1.0)) {
      throw std::invalid_argument(
          "quantile_upper: argument must lie strictly in (0,1)");
    }
    if (family_ == ScoreFamily::kNormal) {
      return -normal_quantile(w);
    }
    return (std::pow(w, -1.0 / nu_) - mu_) / sigma_;
  }

  double cdf(double g) const {
    if (family_ == ScoreFamily::kNormal) {
      return normal_cdf(g);
    }
    const double x = sigma_ * g + mu_;
    if (x <= 1.0) {
      return 0.0;
    }
    return 1.0 - std::pow(x, -nu_);
  }

  /// Consumes exactly one uniform from the stream regardless of family.
  double sample(RngStream& stream) const {
    if (family_ == ScoreFamily::kNormal) {
      return stream.standard_normal();
    }
    return quantile(stream.uniform());
  }

  std::string label() const {
    if (family_ == ScoreFamily::kNormal) {
      return "normal";
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "pareto(nu=%g)", nu_);
    return buf;
  }

 private:
  ScoreDistribution(ScoreFamily family, double nu) : family_(family), nu_(nu) {
    if (family_ == ScoreFamily::kPareto) {
      mu_ = nu_ / (nu_ - 1.0);
      sigma_ = std::sqrt(nu_) / ((nu_ - 1.0) * std::sqrt(nu_ - 2.0));
    }
  }

  void require_pareto() const {
    if (family_ != ScoreFamily::kPareto) {
      throw std::logic_error("Pareto parameter requested from a normal score law");
    }
  }

  ScoreFamily family_;
  double nu_ = 0.0;
  double mu_ = 0.0;
  double sigma_ = 1.0;
};

}  // namespace haystack
