#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "pacsketch/estimators.hpp"

using namespace pacsketch;

namespace {

// Binomial CDF summed term by term in long double.
long double binom_cdf_oracle(std::size_t n, std::size_t h, long double eps) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i <= h; ++i) {
    const long double log_c = std::lgammal(static_cast<long double>(n) + 1) -
                              std::lgammal(static_cast<long double>(i) + 1) -
                              std::lgammal(static_cast<long double>(n - i) + 1);
    sum += std::exp(log_c + static_cast<long double>(i) * std::log(eps) +
                     static_cast<long double>(n - i) * std::log(1.0L - eps));
  }
  return sum;
}

MistakeBudget k_oracle(std::size_t n, double eps, double delta) {
  MistakeBudget k;
  for (std::size_t h = 0; h <= n; ++h) {
    if (binom_cdf_oracle(n, h, eps) <= delta) {
      k = h;
    } else {
      break;
    }
  }
  return k;
}

}  // namespace

TEST_CASE("compute_k reference values") {
  CHECK(compute_k(100, 0.05, 0.05) == MistakeBudget{1});
  CHECK(k_oracle(100, 0.05, 0.05) == MistakeBudget{1});
  CHECK_FALSE(compute_k(10, 0.01, 0.05).has_value());
  CHECK_FALSE(k_oracle(10, 0.01, 0.05).has_value());
}

TEST_CASE("compute_k agrees with the long double oracle") {
  for (std::size_t n : {1u, 5u, 20u, 59u, 60u, 100u, 250u, 500u, 1000u}) {
    for (double eps : {0.01, 0.05, 0.1, 0.3}) {
      for (double delta : {0.01, 0.05, 0.2}) {
        CAPTURE(n);
        CAPTURE(eps);
        CAPTURE(delta);
        CHECK(compute_k(n, eps, delta) == k_oracle(n, eps, delta));
      }
    }
  }
}

TEST_CASE("binom_tail_log matches the oracle") {
  for (std::size_t h : {0u, 3u, 10u, 40u}) {
    const double got = binom_tail_log(200, h, 0.05);
    const double want = static_cast<double>(std::log(binom_cdf_oracle(200, h, 0.05L)));
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK_THROWS_AS(binom_tail_log(10, 11, 0.1), std::domain_error);
  CHECK_THROWS_AS(binom_tail_log(10, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(binom_tail_log(10, 1, 1.0), std::domain_error);
}

TEST_CASE("zero rule only permits k = 0") {
  CHECK(compute_k(100, 0.05, 0.05, MistakeRule::zero) == MistakeBudget{0});
  CHECK_FALSE(compute_k(50, 0.05, 0.05, MistakeRule::zero).has_value());
  // (1 - eps)^n <= delta first holds at n = 59 for eps = delta = 0.05
  CHECK(compute_k(59, 0.05, 0.05, MistakeRule::zero) == MistakeBudget{0});
  CHECK_FALSE(compute_k(58, 0.05, 0.05, MistakeRule::zero).has_value());
}

TEST_CASE("compute_k is monotone in n") {
  std::size_t prev = 0;
  for (std::size_t n = 60; n <= 2000; n += 20) {
    const auto k = compute_k(n, 0.05, 0.05);
    REQUIRE(k.has_value());
    CHECK(*k >= prev);
    prev = *k;
  }
}

TEST_CASE("lower_bound_estimate reference value") {
  std::vector<std::uint8_t> z(200, 0);
  std::fill(z.begin(), z.begin() + 190, 1);
  const long double oracle = 0.95L - std::sqrt(std::log(1.0L / 0.05L) / 400.0L);
  CHECK(std::fabs(lower_bound_estimate(z, 0.05) - 0.8635) <= 1e-4);
  CHECK(std::fabs(lower_bound_estimate(z, 0.05) - static_cast<double>(oracle)) < 1e-12);
}

TEST_CASE("lower_bound_estimate clamps at zero and rejects empty input") {
  std::vector<std::uint8_t> z(10, 0);
  CHECK(lower_bound_estimate(z, 0.05) == 0.0);
  CHECK_THROWS_AS(lower_bound_estimate(std::vector<std::uint8_t>{}, 0.05), std::invalid_argument);
}

TEST_CASE("threshold_estimate picks the (k+1)-th largest plus a margin") {
  // n = 100, k = 1: the second largest value, pushed half way to the largest
  std::vector<double> z(100);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = static_cast<double>(i);
  std::shuffle(z.begin(), z.end(), std::mt19937_64(3));
  EstimatorConfig cfg;
  const auto est = threshold_estimate_detailed(z, cfg);
  CHECK(est.k == MistakeBudget{1});
  CHECK(est.n == 100);
  CHECK(est.threshold == doctest::Approx(98.5));
  CHECK(empirical_loss(z, est.threshold) == 1);
}

TEST_CASE("threshold_estimate is +inf without a mistake budget") {
  std::vector<double> z{0.1, 0.2, 0.3};
  EstimatorConfig cfg;
  CHECK(threshold_estimate(z, cfg) == std::numeric_limits<double>::infinity());
  CHECK(threshold_estimate(std::vector<double>{}, cfg) == std::numeric_limits<double>::infinity());
}

TEST_CASE("threshold_estimate loss never exceeds k") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> z(300);
    for (auto& v : z) v = std::round(nd(rng) * 4.0);  // many ties
    EstimatorConfig cfg;
    cfg.epsilon = 0.1;
    const auto est = threshold_estimate_detailed(z, cfg);
    REQUIRE(est.k.has_value());
    CHECK(empirical_loss(z, est.threshold) <= *est.k);
  }
}

TEST_CASE("gamma_margin") {
  std::vector<double> desc{5.0, 3.0, 3.0, 1.0};
  CHECK(gamma_margin(desc, 1) == doctest::Approx(1.0));
  CHECK(gamma_margin(desc, 2) == doctest::Approx(1.0));
  CHECK(gamma_margin(desc, 0) == doctest::Approx(1e-9 * 6.0));
}

TEST_CASE("verify_indicator") {
  std::vector<std::uint8_t> all_ones(200, 1);
  CHECK(verify_indicator(all_ones, 0.05, 0.05));
  std::vector<std::uint8_t> half(200, 0);
  std::fill(half.begin(), half.begin() + 100, 1);
  CHECK_FALSE(verify_indicator(half, 0.05, 0.05));
  std::vector<std::uint8_t> few(10, 1);
  CHECK_FALSE(verify_indicator(few, 0.01, 0.05));
}

TEST_CASE("EstimatorConfig validation") {
  EstimatorConfig cfg;
  cfg.epsilon = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.epsilon = 0.1;
  cfg.delta = 1.5;
  CHECK_THROWS(cfg.validate());
}
