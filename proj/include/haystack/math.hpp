#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

// Scalar numerics shared across the library. All entropies are in bits;
// natural logs appear only inside log-odds arithmetic and explicit ln-2
// constants.

namespace haystack {

inline constexpr double kInvSqrt2Pi = 0.3989422804014327;
inline constexpr double kInvSqrt2 = 0.7071067811865476;

inline double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("logit: argument must lie strictly in (0,1)");
  }
  return std::log(p / (1.0 - p));
}

inline double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

/// Binary entropy in bits. The p*log(p) terms vanish at the endpoints.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) {
    return 0.0;
  }
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

/// Entropy of Bernoulli(logistic(x)) in bits. Works where logistic(x) itself
/// would round to 0 or 1: h2(logistic(x)) = [softplus(-|x|) + logistic(-|x|)*|x|] / ln 2.
inline double binary_entropy_of_logit(double x) {
  const double ax = std::abs(x);
  return (softplus(-ax) + logistic(-ax) * ax) / std::numbers::ln2;
}

/// KL(Bern(a) || Bern(b)) in bits.
inline double kl_bernoulli(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b > 0.0 && b < 1.0)) {
    throw std::invalid_argument("kl_bernoulli: need a in [0,1], b in (0,1)");
  }
  double kl = 0.0;
  if (a > 0.0) {
    kl += a * std::log2(a / b);
  }
  if (a < 1.0) {
    kl += (1.0 - a) * std::log2((1.0 - a) / (1.0 - b));
  }
  return kl;
}

inline double normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Standard normal quantile by Wichura's PPND16 rational approximations
/// (Applied Statistics 37, 1988, algorithm AS 241): three regimes keyed on the
/// distance from the median, absolute error below 1e-15 across (0,1). That is
/// far inside the 1e-9 accuracy this library relies on.
inline double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("normal_quantile: argument must lie strictly in (0,1)");
  }
  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double v;
  if (r <= 5.0) {
    r -= 1.6;
    v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
        ((((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
               1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
             1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
           5.99832206555887937690e-1) * r + 1.0));
  }
  return q < 0.0 ? -v : v;
}

/// Pairwise reduction over a fixed index order. The result is independent of
/// thread count by construction and the rounding error grows like O(log n).
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 32) {
    double acc = 0.0;
    for (double x : xs) {
      acc += x;
    }
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("mean_of: empty input");
  }
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

/// Standard error of the mean from the sample variance; zero for n == 1.
inline double standard_error_of_mean(std::span<const double> xs, double mean) {
  const std::size_t n = xs.size();
  if (n == 0) {
    throw std::invalid_argument("standard_error_of_mean: empty input");
  }
  if (n == 1) {
    return 0.0;
  }
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - mean;
    sq[i] = d * d;
  }
  const double nn = static_cast<double>(n);
  return std::sqrt(pairwise_sum(sq) / (nn * (nn - 1.0)));
}

}  // namespace haystack
