#ifndef PACSKETCH_HARNESS_HPP
#define PACSKETCH_HARNESS_HPP

// Monte Carlo checks of the estimator guarantees, program metrics on fresh
// data, and distribution-shift scenarios for the verifier and monitor.
//
// Every check is reproducible from (config, seed): trial i draws from its own
// stream split_seed(seed, i), so results do not depend on the thread count.
// Observed failure fractions are compared against delta plus a 3-sigma
// binomial slack, 3 * sqrt(delta (1 - delta) / trials).

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/parallel.hpp"
#include "pacsketch/sketch_ir.hpp"
#include "pacsketch/synthesizer.hpp"
#include "pacsketch/tasks.hpp"
#include "pacsketch/verifier.hpp"

namespace pacsketch {

// ---- distributions with closed-form CDFs ----

enum class Family { uniform, normal, exponential };

struct Distribution {
  Family family = Family::uniform;
  double a = 0.0;  // uniform low, normal mean, exponential rate
  double b = 1.0;  // uniform high, normal standard deviation

  static Distribution uniform(double lo = 0.0, double hi = 1.0);
  static Distribution normal(double mean = 0.0, double sd = 1.0);
  static Distribution exponential(double rate = 1.0);

  double sample(std::mt19937_64& rng) const;
  /// P(X <= x); 0 at -inf, 1 at +inf.
  double cdf(double x) const;
  std::string name() const;
};

// ---- Monte Carlo validation ----

struct McReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double fraction = 0.0;
  double slack = 0.0;          // 3-sigma binomial slack at the nominal rate
  double bound = 0.0;          // nominal rate + slack
  double mean_coverage = 0.0;  // average true probability, where meaningful

  bool pass() const { return fraction <= bound; }
};

double binomial_slack(double rate, std::size_t trials);

struct TrialConfig {
  Distribution dist;
  std::size_t n = 500;
  std::size_t trials = 2000;
  double eps = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::parallel;

  void validate() const;
};

/// Failure: the true P(z <= t) falls below 1 - eps.
McReport mc_validate_threshold(const TrialConfig& cfg);

/// Failure: the lower bound exceeds the Bernoulli mean mu.
McReport mc_validate_lower_bound(double mu, std::size_t n, double delta, std::size_t trials,
                                 std::uint64_t seed, ExecPolicy policy = ExecPolicy::parallel);

/// Counts acceptances of Bernoulli(mu) samples. For mu < 1 - eps every
/// acceptance is a false accept; for larger mu the fraction is the power.
McReport mc_validate_verifier(double mu, std::size_t n, double eps, double delta,
                              std::size_t trials, std::uint64_t seed,
                              ExecPolicy policy = ExecPolicy::parallel);

/// A three-spec full sketch and(A, and(B, C)) over synthetic scores:
///   A  conditional, threshold hole, eps 0.1: y ~ Bern(0.3), s | y ~ N(0,1)
///   B  implication, threshold hole, eps 0.1: y ~ Bern(0.5), s | y ~ Exp(1)
///   C  conditional, eps hole, threshold 0.8: y ~ Bern(0.5), s | y ~ U(0,1)
/// Failure: some filled spec's true satisfaction probability is below 1 - eps.
ir::Expr three_spec_sketch();
ir::Valuation three_spec_draw(std::mt19937_64& rng);
McReport mc_validate_sketch(std::size_t n, double delta, std::size_t trials,
                            std::uint64_t seed, ExecPolicy policy = ExecPolicy::parallel);

// ---- program metrics ----

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% Wilson score interval for hits / n.
Interval wilson(std::size_t hits, std::size_t n, double z = 1.959963984540054);

struct MetricsReport {
  std::size_t n = 0;
  std::size_t bots = 0;
  std::size_t failures = 0;          // non-bottom with error > e (or shape mismatch)
  std::size_t mismatches = 0;        // non-bottom and not equal to the true output
  std::size_t length_mismatches = 0;
  double bot_rate = 0.0;
  double failure_rate = 0.0;
  double mismatch_rate = 0.0;
  Interval bot_ci;
  Interval failure_ci;
};

/// Test-mode output compared with train-mode output on every example.
MetricsReport evaluate_program(const dsl::Prog& p, const dsl::Fill& fill,
                               std::span<const dsl::DslExample> data, double err,
                               bool fast = false, ExecPolicy policy = ExecPolicy::parallel);

struct TaskRunConfig {
  std::size_t seeds = 10;
  std::size_t train_size = 5000;  // split into synth and sketch halves
  std::size_t eval_size = 5000;
  std::uint64_t seed = 1;
  dsl::PredictorConfig predictor;
  SynthesisOptions synthesis;  // seed and partial are set per run
};

struct SeedRun {
  std::uint64_t seed = 0;
  SynthesisResult result;
  MetricsReport metrics;
};

struct TaskRun {
  std::string task;
  std::string variant;
  std::string program;
  std::vector<SeedRun> runs;
  double mean_bot = 0.0;
  double mean_failure = 0.0;
  double max_failure = 0.0;
  double seconds = 0.0;
};

/// Synthesizes the task once per seed on fresh data and evaluates on a further
/// fresh set. The enumerated program is shared across seeds.
TaskRun run_task(const TaskSpec& task, const std::string& variant, const TaskRunConfig& cfg);

/// Plain-text table with one row per task: program, bottom rate, failure rate.
std::string format_table(const std::vector<TaskRun>& rows);

// ---- distribution shift ----

/// Labelled predictions: inputs "pred" (int) and "conf" (float), truth "y*".
std::vector<ir::Valuation> prediction_valuations(const dsl::PredictorConfig& cfg, std::size_t n,
                                                 std::uint64_t seed);

struct ShiftData {
  std::vector<ir::Valuation> base;
  std::vector<ir::Valuation> shifted;
};

/// The base set depends only on (base, n, seed).
ShiftData shift_scenario(const dsl::PredictorConfig& base, const dsl::PredictorConfig& shifted,
                         std::size_t n, std::uint64_t seed);

/// phi(conf, 0) { pred != y* }_eps^=> : satisfied exactly when the prediction
/// is right, so its satisfaction probability is the accuracy.
ir::Expr accuracy_assertion(double eps);

struct MonitorTrialConfig {
  dsl::PredictorConfig base;
  dsl::PredictorConfig shifted;
  std::size_t window = 500;
  std::size_t trials = 200;
  double eps = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct MonitorTrialReport {
  std::size_t trials = 0;
  double accept_base = 0.0;     // fraction of base windows accepted
  double reject_shifted = 0.0;  // fraction of shifted windows rejected
};

/// Streams one window per trial through the monitor and records its first
/// verdict.
MonitorTrialReport mc_validate_monitor(const MonitorTrialConfig& cfg);

}  // namespace pacsketch

#endif  // PACSKETCH_HARNESS_HPP
