#include "pacsketch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pacsketch/estimators.hpp"
#include "pacsketch/sketcher.hpp"

namespace pacsketch {

using namespace dsl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  return std::mt19937_64(split_seed(seed, trial));
}

McReport tally(const std::vector<std::uint8_t>& failed, double nominal,
               const std::vector<double>* coverage = nullptr) {
  McReport r;
  r.trials = failed.size();
  for (auto f : failed) r.failures += f;
  r.fraction = r.trials == 0 ? 0.0 : static_cast<double>(r.failures) / static_cast<double>(r.trials);
  r.slack = binomial_slack(nominal, r.trials);
  r.bound = nominal + r.slack;
  if (coverage != nullptr && !coverage->empty()) {
    double sum = 0.0;
    for (double c : *coverage) sum += c;
    r.mean_coverage = sum / static_cast<double>(coverage->size());
  }
  return r;
}

void check_trials(std::size_t trials) {
  if (trials < 100) throw std::invalid_argument("at least 100 trials are required");
}

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform: need lo < hi");
  return Distribution{Family::uniform, lo, hi};
}

Distribution Distribution::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("normal: sd must be positive");
  return Distribution{Family::normal, mean, sd};
}

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return Distribution{Family::exponential, rate, 0.0};
}

double Distribution::sample(std::mt19937_64& rng) const {
  switch (family) {
    case Family::uniform:
      return std::uniform_real_distribution<double>(a, b)(rng);
    case Family::normal:
      return std::normal_distribution<double>(a, b)(rng);
    case Family::exponential:
      return std::exponential_distribution<double>(a)(rng);
  }
  return 0.0;
}

double Distribution::cdf(double x) const {
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  switch (family) {
    case Family::uniform:
      return std::clamp((x - a) / (b - a), 0.0, 1.0);
    case Family::normal:
      return 0.5 * std::erfc(-(x - a) / (b * std::sqrt(2.0)));
    case Family::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
  }
  return 0.0;
}

std::string Distribution::name() const {
  std::ostringstream os;
  switch (family) {
    case Family::uniform:
      os << "uniform(" << a << "," << b << ")";
      break;
    case Family::normal:
      os << "normal(" << a << "," << b << ")";
      break;
    case Family::exponential:
      os << "exponential(" << a << ")";
      break;
  }
  return os.str();
}

double binomial_slack(double rate, std::size_t trials) {
  if (trials == 0) return 0.0;
  return 3.0 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

void TrialConfig::validate() const {
  check_trials(trials);
  if (n == 0) throw std::invalid_argument("n must be positive");
  EstimatorConfig{eps, delta, MistakeRule::binomial}.validate();
}

McReport mc_validate_threshold(const TrialConfig& cfg) {
  cfg.validate();
  EstimatorConfig ecfg{cfg.eps, cfg.delta, MistakeRule::binomial};
  std::vector<std::uint8_t> failed(cfg.trials, 0);
  std::vector<double> coverage(cfg.trials, 0.0);
  parallel_for(cfg.trials, cfg.policy, [&](std::size_t t) {
    auto rng = trial_rng(cfg.seed, t);
    ScoreSample z(cfg.n);
    for (auto& v : z) v = cfg.dist.sample(rng);
    const double that = threshold_estimate(z, ecfg);
    coverage[t] = cfg.dist.cdf(that);
    failed[t] = coverage[t] < 1.0 - cfg.eps ? 1 : 0;
  });
  return tally(failed, cfg.delta, &coverage);
}

McReport mc_validate_lower_bound(double mu, std::size_t n, double delta, std::size_t trials,
                                 std::uint64_t seed, ExecPolicy policy) {
  check_trials(trials);
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0,1]");
  std::vector<std::uint8_t> failed(trials, 0);
  std::vector<double> estimates(trials, 0.0);
  parallel_for(trials, policy, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    std::bernoulli_distribution coin(mu);
    BitSample z(n);
    for (auto& b : z) b = coin(rng) ? 1 : 0;
    estimates[t] = lower_bound_estimate(z, delta);
    failed[t] = estimates[t] > mu ? 1 : 0;
  });
  return tally(failed, delta, &estimates);
}

McReport mc_validate_verifier(double mu, std::size_t n, double eps, double delta,
                              std::size_t trials, std::uint64_t seed, ExecPolicy policy) {
  check_trials(trials);
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0,1]");
  std::vector<std::uint8_t> accepted(trials, 0);
  parallel_for(trials, policy, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    std::bernoulli_distribution coin(mu);
    BitSample z(n);
    for (auto& b : z) b = coin(rng) ? 1 : 0;
    accepted[t] = verify_indicator(z, eps, delta) ? 1 : 0;
  });
  return tally(accepted, delta);
}

ir::Expr three_spec_sketch() {
  using ir::GuaranteeMode;
  const ir::Expr a = ir::spec(ir::input("s1"), std::nullopt, ir::truth("y1"), 0.1,
                              GuaranteeMode::conditional);
  const ir::Expr b = ir::spec(ir::input("s2"), std::nullopt, ir::truth("y2"), 0.1,
                              GuaranteeMode::implication);
  const ir::Expr c = ir::spec(ir::input("s3"), 0.8, ir::truth("y3"), std::nullopt,
                              GuaranteeMode::conditional);
  return ir::apply("and", {a, ir::apply("and", {b, c})});
}

ir::Valuation three_spec_draw(std::mt19937_64& rng) {
  std::bernoulli_distribution y1(0.3);
  std::bernoulli_distribution half(0.5);
  ir::Valuation v;
  v.ground_truth["y1"] = y1(rng);
  v.inputs["s1"] = Distribution::normal().sample(rng);
  v.ground_truth["y2"] = half(rng);
  v.inputs["s2"] = Distribution::exponential().sample(rng);
  v.ground_truth["y3"] = half(rng);
  v.inputs["s3"] = Distribution::uniform().sample(rng);
  return v;
}

McReport mc_validate_sketch(std::size_t n, double delta, std::size_t trials, std::uint64_t seed,
                            ExecPolicy policy) {
  check_trials(trials);
  const ir::Expr sketch_expr = three_spec_sketch();
  const Distribution normal = Distribution::normal();
  const Distribution expo = Distribution::exponential();
  std::vector<std::uint8_t> failed(trials, 0);
  parallel_for(trials, policy, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    std::vector<ir::Valuation> data;
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.push_back(three_spec_draw(rng));
    SketchJob job;
    job.program = sketch_expr;
    job.data = data;
    job.delta = delta;
    job.policy = ExecPolicy::serial;
    const SketchReport rep = sketch(job);
    const ir::Spec& a = ir::spec_at(rep.completed, {0});
    const ir::Spec& b = ir::spec_at(rep.completed, {1, 0});
    const ir::Spec& c = ir::spec_at(rep.completed, {1, 1});
    // A: P(s <= t | y) with s | y ~ N(0,1).
    const bool fail_a = normal.cdf(*a.threshold) < 1.0 - *a.eps;
    // B: P(not y or s <= t) = 1/2 + 1/2 P(s <= t).
    const bool fail_b = 0.5 + 0.5 * expo.cdf(*b.threshold) < 1.0 - *b.eps;
    // C: P(s <= 0.8 | y) = 0.8.
    const bool fail_c = 0.8 < 1.0 - *c.eps;
    failed[t] = fail_a || fail_b || fail_c ? 1 : 0;
  });
  return tally(failed, delta);
}

Interval wilson(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return Interval{0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return Interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MetricsReport evaluate_program(const Prog& p, const Fill& fill, std::span<const DslExample> data,
                               double err, bool fast, ExecPolicy policy) {
  enum Outcome : std::uint8_t { ok = 0, bottom = 1, off = 2, failed = 4, shape = 8 };
  std::vector<std::uint8_t> outcome(data.size(), ok);
  EvalOptions test;
  test.mode = Mode::test;
  test.fill = &fill;
  test.fast = fast;
  EvalOptions train;
  train.mode = Mode::train;
  parallel_for(data.size(), policy, [&](std::size_t i) {
    const Value got = eval(p, data[i].inputs, test);
    if (got.is_bot()) {
      outcome[i] = bottom;
      return;
    }
    const Value want = eval(p, data[i].inputs, train);
    std::uint8_t o = values_equal(got, want) ? ok : off;
    try {
      if (output_error(got, want) > err) o |= failed;
    } catch (const DslError&) {
      o |= failed | shape;
    }
    outcome[i] = o;
  });
  MetricsReport r;
  r.n = data.size();
  for (auto o : outcome) {
    r.bots += (o & bottom) != 0 ? 1 : 0;
    r.mismatches += (o & off) != 0 ? 1 : 0;
    r.failures += (o & failed) != 0 ? 1 : 0;
    r.length_mismatches += (o & shape) != 0 ? 1 : 0;
  }
  if (r.n > 0) {
    const double n = static_cast<double>(r.n);
    r.bot_rate = static_cast<double>(r.bots) / n;
    r.failure_rate = static_cast<double>(r.failures) / n;
    r.mismatch_rate = static_cast<double>(r.mismatches) / n;
  }
  r.bot_ci = wilson(r.bots, r.n);
  r.failure_ci = wilson(r.failures, r.n);
  return r;
}

TaskRun run_task(const TaskSpec& task, const std::string& variant, const TaskRunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  TaskRun out;
  out.task = task.name;
  out.variant = variant;
  SynthesisOptions opts = cfg.synthesis;
  if (!opts.partial) opts.partial = synthesize_partial_sketch(task);
  out.program = print_program(*opts.partial);
  for (std::size_t s = 0; s < cfg.seeds; ++s) {
    SeedRun run;
    run.seed = split_seed(cfg.seed, s);
    const auto data = generate_task_data(task, cfg.predictor, cfg.train_size, split_seed(run.seed, 0));
    const auto fresh = generate_task_data(task, cfg.predictor, cfg.eval_size, split_seed(run.seed, 1));
    opts.seed = split_seed(run.seed, 2);
    run.result = synthesize(task, data, opts);
    run.metrics = evaluate_program(run.result.program, run.result.sketch.fill, fresh, task.err,
                                   task.fast, opts.policy);
    out.mean_bot += run.metrics.bot_rate;
    out.mean_failure += run.metrics.failure_rate;
    out.max_failure = std::max(out.max_failure, run.metrics.failure_rate);
    out.runs.push_back(std::move(run));
  }
  if (!out.runs.empty()) {
    out.mean_bot /= static_cast<double>(out.runs.size());
    out.mean_failure /= static_cast<double>(out.runs.size());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string format_table(const std::vector<TaskRun>& rows) {
  std::size_t prog_width = 7;
  for (const auto& r : rows) prog_width = std::max(prog_width, r.program.size());
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-8s %10s %10s %10s %6s %8s  ", "task", "variant",
                "bot rate", "fail mean", "fail max", "seeds", "seconds");
  os << buf << "program\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %-8s %10.4f %10.4f %10.4f %6zu %8.2f  ", r.task.c_str(),
                  r.variant.c_str(), r.mean_bot, r.mean_failure, r.max_failure, r.runs.size(),
                  r.seconds);
    os << buf << r.program << "\n";
  }
  return os.str();
}

std::vector<ir::Valuation> prediction_valuations(const PredictorConfig& cfg, std::size_t n,
                                                 std::uint64_t seed) {
  const auto records = synth_predictor(cfg, n, seed);
  std::vector<ir::Valuation> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    ir::Valuation v;
    v.inputs["pred"] = static_cast<std::int64_t>(std::llround(r.pred.value));
    v.inputs["conf"] = r.pred.confidence;
    v.ground_truth["y*"] = *r.truth_int;
    out.push_back(std::move(v));
  }
  return out;
}

ShiftData shift_scenario(const PredictorConfig& base, const PredictorConfig& shifted,
                         std::size_t n, std::uint64_t seed) {
  ShiftData out;
  out.base = prediction_valuations(base, n, split_seed(seed, 0));
  out.shifted = prediction_valuations(shifted, n, split_seed(seed, 1));
  return out;
}

ir::Expr accuracy_assertion(double eps) {
  return ir::spec(ir::input("conf"), 0.0, ir::apply("ne", {ir::input("pred"), ir::truth("y*")}),
                  eps, ir::GuaranteeMode::implication);
}

MonitorTrialReport mc_validate_monitor(const MonitorTrialConfig& cfg) {
  check_trials(cfg.trials);
  if (cfg.window == 0) throw std::invalid_argument("window must be positive");
  const ir::Expr assertion = accuracy_assertion(cfg.eps);
  MonitorConfig mcfg;
  mcfg.refresh_every = cfg.window;
  mcfg.min_window = cfg.window;
  mcfg.max_age = cfg.window;
  mcfg.delta = cfg.delta;
  std::vector<std::uint8_t> accepted(cfg.trials, 0);
  std::vector<std::uint8_t> rejected(cfg.trials, 0);
  auto first_verdict = [&](std::vector<ir::Valuation> stream) {
    MonitorState state;
    for (auto& v : stream) {
      if (auto verdict = monitor_record(state, mcfg, std::move(v), assertion)) {
        return verdict->report.accepted;
      }
    }
    throw std::logic_error("monitor produced no verdict");
  };
  parallel_for(cfg.trials, cfg.policy, [&](std::size_t t) {
    const ShiftData d = shift_scenario(cfg.base, cfg.shifted, cfg.window, split_seed(cfg.seed, t));
    accepted[t] = first_verdict(d.base) ? 1 : 0;
    rejected[t] = first_verdict(d.shifted) ? 0 : 1;
  });
  MonitorTrialReport r;
  r.trials = cfg.trials;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    r.accept_base += accepted[t];
    r.reject_shifted += rejected[t];
  }
  r.accept_base /= static_cast<double>(cfg.trials);
  r.reject_shifted /= static_cast<double>(cfg.trials);
  return r;
}

}  // namespace pacsketch
