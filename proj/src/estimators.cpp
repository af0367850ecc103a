#include "pacsketch/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace pacsketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in (0,1), got " + std::to_string(p));
  }
}

double log_binomial_term(std::size_t n, std::size_t i, double log_eps, double log_1m_eps) {
  const double nd = static_cast<double>(n);
  const double id = static_cast<double>(i);
  return std::lgamma(nd + 1.0) - std::lgamma(id + 1.0) - std::lgamma(nd - id + 1.0) +
         id * log_eps + (nd - id) * log_1m_eps;
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

void EstimatorConfig::validate() const {
  check_probability(epsilon, "epsilon");
  check_probability(delta, "delta");
}

double binom_tail_log(std::size_t n, std::size_t h, double eps) {
  check_probability(eps, "eps");
  if (h > n) {
    throw std::domain_error("binom_tail_log: h > n");
  }
  const double log_eps = std::log(eps);
  const double log_1m_eps = std::log1p(-eps);
  double acc = -kInf;
  for (std::size_t i = 0; i <= h; ++i) {
    acc = log_add_exp(acc, log_binomial_term(n, i, log_eps, log_1m_eps));
  }
  // The full sum is exactly one; rounding can push it a hair above zero.
  return std::min(acc, 0.0);
}

MistakeBudget compute_k(std::size_t n, double eps, double delta, MistakeRule rule) {
  check_probability(eps, "eps");
  check_probability(delta, "delta");
  if (n == 0) return std::nullopt;

  const double log_delta = std::log(delta);
  const double log_eps = std::log(eps);
  const double log_1m_eps = std::log1p(-eps);

  double tail = log_binomial_term(n, 0, log_eps, log_1m_eps);
  if (tail > log_delta) return std::nullopt;
  if (rule == MistakeRule::zero) return std::size_t{0};

  // Incremental scan; the tail at h = n is one, so the cap n - 1 is implicit.
  std::size_t k = 0;
  for (std::size_t h = 1; h < n; ++h) {
    tail = log_add_exp(tail, log_binomial_term(n, h, log_eps, log_1m_eps));
    if (tail > log_delta) break;
    k = h;
  }
  return k;
}

std::size_t empirical_loss(std::span<const double> z, double t) {
  return static_cast<std::size_t>(
      std::count_if(z.begin(), z.end(), [t](double v) { return v > t; }));
}

double gamma_margin(std::span<const double> sorted_desc, std::size_t index) {
  const double base = sorted_desc[index];
  for (std::size_t i = index; i-- > 0;) {
    if (sorted_desc[i] > base) {
      if (std::isfinite(sorted_desc[i])) return 0.5 * (sorted_desc[i] - base);
      break;
    }
  }
  return 1e-9 * (1.0 + std::abs(base));
}

ThresholdEstimate threshold_estimate_detailed(std::span<const double> z,
                                              const EstimatorConfig& cfg) {
  cfg.validate();
  ThresholdEstimate out;
  out.n = z.size();
  out.k = compute_k(z.size(), cfg.epsilon, cfg.delta, cfg.rule);
  if (!out.k || *out.k + 1 > z.size()) {
    out.threshold = kInf;
    return out;
  }

  std::vector<double> sorted(z.begin(), z.end());
  for (double v : sorted) {
    if (std::isnan(v)) throw std::invalid_argument("threshold_estimate: NaN score");
  }
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());

  const std::size_t idx = *out.k;
  const double pivot = sorted[idx];
  if (!std::isfinite(pivot)) {
    out.threshold = pivot;
    return out;
  }
  double t = pivot + gamma_margin(sorted, idx);
  // Adjacent doubles leave no room strictly between; the pivot itself is still sound.
  for (std::size_t i = idx; i-- > 0;) {
    if (sorted[i] > pivot) {
      if (t >= sorted[i]) t = pivot;
      break;
    }
  }
  out.threshold = t;
  return out;
}

double threshold_estimate(std::span<const double> z, const EstimatorConfig& cfg) {
  return threshold_estimate_detailed(z, cfg).threshold;
}

double lower_bound_estimate(std::span<const std::uint8_t> z, double delta) {
  check_probability(delta, "delta");
  if (z.empty()) {
    throw std::invalid_argument("lower_bound_estimate: empty sample");
  }
  const double n = static_cast<double>(z.size());
  std::size_t ones = 0;
  for (auto bit : z) ones += bit != 0 ? 1 : 0;
  const double mean = static_cast<double>(ones) / n;
  const double correction = std::sqrt(std::log(1.0 / delta) / (2.0 * n));
  return std::max(0.0, mean - correction);
}

bool verify_indicator(std::span<const std::uint8_t> z, double eps, double delta) {
  const MistakeBudget k = compute_k(z.size(), eps, delta);
  if (!k) return false;
  std::size_t zeros = 0;
  for (auto bit : z) zeros += bit == 0 ? 1 : 0;
  return zeros <= *k;
}

}  // namespace pacsketch
