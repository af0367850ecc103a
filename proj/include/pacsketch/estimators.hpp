#ifndef PACSKETCH_ESTIMATORS_HPP
#define PACSKETCH_ESTIMATORS_HPP

// Statistical estimators behind sketching and verification:
//
//   threshold_estimate    smallest t with P(z <= t) >= 1 - eps, w.p. >= 1 - delta
//   lower_bound_estimate  Hoeffding lower confidence bound on a Bernoulli mean
//   verify_indicator      accepts only if the mean is >= 1 - eps, w.p. >= 1 - delta
//
// The first and last share the mistake budget k: the largest h whose binomial
// tail sum_{i<=h} C(n,i) eps^i (1-eps)^(n-i) stays <= delta.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pacsketch {

// Scores may carry -inf / +inf sentinels but never NaN.
using ScoreSample = std::vector<double>;
using BitSample = std::vector<std::uint8_t>;

// std::nullopt plays the role of "k does not exist".
using MistakeBudget = std::optional<std::size_t>;

enum class MistakeRule {
  binomial,  // largest h with binomial tail <= delta
  zero,      // k = 0 when the zero-mistake tail is <= delta (classical realizable bound)
};

struct EstimatorConfig {
  double epsilon = 0.05;
  double delta = 0.05;
  MistakeRule rule = MistakeRule::binomial;

  void validate() const;
};

/// log of the binomial CDF at h for Binomial(n, eps), summed in log space.
/// Throws std::domain_error for eps outside (0,1) or h > n.
double binom_tail_log(std::size_t n, std::size_t h, double eps);

MistakeBudget compute_k(std::size_t n, double eps, double delta,
                        MistakeRule rule = MistakeRule::binomial);

/// Number of samples strictly greater than t.
std::size_t empirical_loss(std::span<const double> z, double t);

/// Margin added to the (k+1)-th largest value: half the gap to the next
/// strictly larger sample, or 1e-9 * (1 + |z|) when none exists.
double gamma_margin(std::span<const double> sorted_desc, std::size_t index);

struct ThresholdEstimate {
  double threshold = 0.0;  // +inf when k does not exist or k + 1 > n
  MistakeBudget k;
  std::size_t n = 0;
};

ThresholdEstimate threshold_estimate_detailed(std::span<const double> z,
                                              const EstimatorConfig& cfg);

double threshold_estimate(std::span<const double> z, const EstimatorConfig& cfg);

/// max(0, mean - sqrt(ln(1/delta) / 2n)). Throws std::invalid_argument on empty input.
double lower_bound_estimate(std::span<const std::uint8_t> z, double delta);

bool verify_indicator(std::span<const std::uint8_t> z, double eps, double delta);

}  // namespace pacsketch

#endif  // PACSKETCH_ESTIMATORS_HPP
