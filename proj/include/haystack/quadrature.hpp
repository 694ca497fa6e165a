#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haystack {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct QuadratureResult {
  double value = 0.0;
  /// Upper estimate of the quadrature error actually achieved.
  double error_estimate = 0.0;
};

/// Thrown by callers that demand a tolerance the adaptive rule could not
/// certify; carries the error estimate it did achieve.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& message, double achieved)
      : std::runtime_error(message), achieved_(achieved) {}

  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

/// Nodes and weights of the n-point Gauss-Hermite rule taken against the
/// standard normal density: E[f(G)] ~ sum_i w_i f(x_i) with sum_i w_i = 1.
/// Golub-Welsch: eigenvalues of the symmetric Jacobi matrix with offdiagonal
/// sqrt(k), weights the squared first eigenvector components.  Rules are
/// cached for the lifetime of the process.
inline const QuadratureRule& gauss_hermite(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_hermite: order must be positive");
  }
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) {
    return it->second;
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double head = solver.eigenvectors()(0, i);
    rule.weights[i] = head * head;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

/// E[f(G)] for standard normal G by the n-point Gauss-Hermite rule.  The
/// error estimate compares against the rule of half the order, which is
/// pessimistic for the smooth integrands used here.
template <typename F>
QuadratureResult expect_normal(F&& f, int n = 128) {
  auto apply = [&](const QuadratureRule& rule) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(rule.nodes[i]);
    }
    return acc;
  };
  const double fine = apply(gauss_hermite(n));
  const double coarse = apply(gauss_hermite(n / 2 > 0 ? n / 2 : 1));
  return {fine, std::abs(fine - coarse)};
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Odd-index nodes (and the center) are the embedded Gauss points.
inline constexpr double kKronrodNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.2293532201052922e-1, 0.6309209262997855e-1, 0.1047900103222502,
    0.1406532597155259,    0.1690047266392679,    0.1903505780647854,
    0.2044329400752989,    0.2094821410847278};
inline constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <typename F>
void kronrod_segment(F& f, double a, double b, double* gauss, double* kronrod) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Deep bisection against an endpoint can round a node onto the endpoint
  // itself; quantile substitutions are singular exactly there, so evaluation
  // points are clamped into the open segment.
  const double lo = std::nextafter(a, b);
  const double hi = std::nextafter(b, a);
  auto eval = [&](double x) { return f(std::min(std::max(x, lo), hi)); };
  const double fc = eval(center);
  double gk = kKronrodWeights[7] * fc;
  double g7 = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = eval(center - dx) + eval(center + dx);
    gk += kKronrodWeights[j] * pair;
    if (j % 2 == 1) {
      g7 += kGaussWeights[j / 2] * pair;
    }
  }
  *gauss = half * g7;
  *kronrod = half * gk;
}

template <typename F>
void integrate_recursive(F& f, double a, double b, double tol, int depth,
                         int max_depth, QuadratureResult* out) {
  double g7 = 0.0;
  double gk = 0.0;
  kronrod_segment(f, a, b, &g7, &gk);
  const double err = std::abs(gk - g7);
  if (err <= tol || depth >= max_depth) {
    out->value += gk;
    out->error_estimate += err;
    return;
  }
  const double mid = 0.5 * (a + b);
  integrate_recursive(f, a, mid, 0.5 * tol, depth + 1, max_depth, out);
  integrate_recursive(f, mid, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 7/15 on [a, b] with bisection.  The tolerance is
/// split evenly between halves, so integrable endpoint singularities recurse
/// to max_depth there; the depth cap bounds the work and the leftover error
/// shows up in the estimate instead of being hidden.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    double abs_tol = 1e-10,
                                    int max_depth = 48) {
  if (!(b > a)) {
    throw std::invalid_argument("integrate_adaptive: requires b > a");
  }
  if (!(abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_adaptive: tolerance must be positive");
  }
  QuadratureResult out;
  detail::integrate_recursive(f, a, b, abs_tol, 0, max_depth, &out);
  return out;
}

}  // namespace haystack
