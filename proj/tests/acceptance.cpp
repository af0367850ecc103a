// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pacsketch/allocator.hpp"
#include "pacsketch/estimators.hpp"
#include "pacsketch/harness.hpp"
#include "pacsketch/listdsl.hpp"
#include "pacsketch/tasks.hpp"
#include "properties.hpp"

using namespace pacsketch;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Check()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(secs < limit_seconds, fmt("runtime %.2fs < %.0fs", secs, limit_seconds));
  if (!c.pass) ++failures;
  std::printf("%s criterion %d: %s [%s]\n", c.pass ? "PASS" : "FAIL", id, title, c.detail.c_str());
  std::fflush(stdout);
}

long double binom_cdf(std::size_t n, std::size_t h, long double eps) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i <= h; ++i) {
    sum += std::exp(std::lgammal(n + 1.0L) - std::lgammal(i + 1.0L) - std::lgammal(n - i + 1.0L) +
                     i * std::log(eps) + (n - i) * std::log(1.0L - eps));
  }
  return sum;
}

MistakeBudget k_oracle(std::size_t n, long double eps, long double delta) {
  MistakeBudget k;
  for (std::size_t h = 0; h <= n && binom_cdf(n, h, eps) <= delta; ++h) k = h;
  return k;
}

std::string mc_line(const std::string& name, const McReport& r) {
  return name + fmt(" %.4f<=%.4f", r.fraction, r.bound);
}

double mean_bot(const TaskRun& r) {
  double s = 0.0;
  for (const auto& run : r.runs) s += run.metrics.bot_rate;
  return s / static_cast<double>(r.runs.size());
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());

  criterion(1, "estimator values against extended-precision oracles", 1.0, [] {
    Check c;
    const auto k1 = compute_k(100, 0.05, 0.05);
    c.require(k1 == MistakeBudget{1} && k_oracle(100, 0.05L, 0.05L) == k1, "k(100,.05,.05)=1");
    const auto k2 = compute_k(10, 0.01, 0.05);
    c.require(!k2 && !k_oracle(10, 0.01L, 0.05L), "k(10,.01,.05) does not exist");
    std::vector<std::uint8_t> z(200, 0);
    for (std::size_t i = 0; i < 190; ++i) z[i] = 1;
    const double lb = lower_bound_estimate(z, 0.05);
    const long double oracle = 0.95L - std::sqrt(std::log(20.0L) / 400.0L);
    c.require(std::fabs(lb - 0.8635) <= 1e-4 && std::fabs(lb - static_cast<double>(oracle)) < 1e-12,
              fmt("lower bound %.6f", lb));
    return c;
  });

  criterion(2, "threshold estimator PAC rate by Monte Carlo", 30.0, [] {
    Check c;
    for (const auto& d : {Distribution::uniform(), Distribution::normal(), Distribution::exponential()}) {
      TrialConfig cfg;
      cfg.dist = d;
      cfg.n = 500;
      cfg.eps = 0.1;
      cfg.delta = 0.05;
      cfg.trials = 2000;
      cfg.seed = 101;
      const McReport r = mc_validate_threshold(cfg);
      c.require(r.pass() && r.fraction <= 0.065, mc_line(d.name(), r));
    }
    return c;
  });

  criterion(3, "lower bound and verifier error rates by Monte Carlo", 30.0, [] {
    Check c;
    std::uint64_t seed = 201;
    for (double mu : {0.5, 0.9, 0.99}) {
      const McReport r = mc_validate_lower_bound(mu, 300, 0.05, 2000, seed++);
      c.require(r.pass(), mc_line(fmt("nu mu=%.2f", mu), r));
    }
    const double eps = 0.05;
    const McReport fa = mc_validate_verifier(1.0 - 2.0 * eps, 300, eps, 0.05, 2000, seed++);
    c.require(fa.pass(), mc_line("false accept mu=0.90", fa));
    const McReport power = mc_validate_verifier(1.0 - eps / 2.0, 300, eps, 0.05, 2000, seed++);
    c.detail += fmt("; power mu=%.3f: %.3f", 1.0 - eps / 2.0, power.fraction);
    return c;
  });

  criterion(4, "three-hole full sketch PAC rate by Monte Carlo", 120.0, [] {
    Check c;
    const McReport r = mc_validate_sketch(1000, 0.05, 500, 301);
    c.require(r.pass(), mc_line("any spec below 1-eps", r));
    return c;
  });

  criterion(5, "conditional-sum static analyses", 1.0, [] {
    Check c;
    const dsl::Prog p = dsl::parse_program(
        "(fold + (filter (cond-<= (predict_int input1)) (map predict_float input2)) 0)");
    c.require(count_all(p, 3) == std::vector<std::size_t>{3, 3, 3}, "counts (3,3,3)");
    const std::string form = error_bound(p, 3).to_string();
    c.require(form == "3·e_f3", "error form " + form);
    const auto errs = candidate_errs(p, 6.0, 3, GridSpec{});
    c.require(errs.size() == 1 && errs[0][2] == 2.0 && errs[0][0] == 0.0 && errs[0][1] == 0.0,
              "single candidate e_f3 = e/3 = 2");
    return c;
  });

  criterion(6, "end-to-end synthesis on five integer tasks", 300.0, [] {
    Check c;
    std::vector<TaskRun> rows;
    for (const auto& name : task_names()) {
      TaskRunConfig cfg;
      cfg.seeds = 10;
      cfg.train_size = 5000;
      cfg.eval_size = 5000;
      cfg.seed = 601;
      const TaskRun r = run_task(make_task(name, TaskVariant::integer), "integer", cfg);
      bool ok = r.runs.size() == 10;
      for (const auto& run : r.runs) ok = ok && run.metrics.failure_rate <= 0.05;
      c.require(ok, name + fmt(" max failure %.4f, mean bot %.4f", r.max_failure, r.mean_bot));
      rows.push_back(r);
    }
    std::printf("%s", format_table(rows).c_str());
    return c;
  });

  criterion(7, "search and mistake-budget orderings on real conditional sum", 300.0, [] {
    Check c;
    const TaskSpec task = make_task("cond_sum", TaskVariant::real);
    TaskRunConfig base;
    base.seeds = 10;
    base.seed = 701;
    const TaskRun full = run_task(task, "real", base);
    TaskRunConfig single = base;
    single.synthesis.grid.single_point = true;
    const TaskRun nosearch = run_task(task, "real", single);
    TaskRunConfig zero = base;
    zero.synthesis.rule = MistakeRule::zero;
    const TaskRun kzero = run_task(task, "real", zero);
    const double b_full = mean_bot(full);
    const double b_single = mean_bot(nosearch);
    const double b_zero = mean_bot(kzero);
    c.require(b_full <= b_single + 0.01, fmt("bot search %.4f vs no-search %.4f", b_full, b_single));
    c.require(b_full <= b_zero, fmt("bot binomial %.4f vs k=0 %.4f", b_full, b_zero));
    c.detail += fmt("; max failure %.4f/%.4f", full.max_failure, kzero.max_failure);

    // At the threshold level a positive mistake budget strictly lowers t.
    std::mt19937_64 rng(702);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool strict = true;
    for (std::size_t n : {200u, 1000u, 5000u}) {
      std::vector<double> z(n);
      for (auto& v : z) v = u(rng);
      EstimatorConfig binom;
      EstimatorConfig k0;
      k0.rule = MistakeRule::zero;
      const auto a = threshold_estimate_detailed(z, binom);
      const auto b = threshold_estimate_detailed(z, k0);
      strict = strict && a.k && *a.k > 0 && a.threshold < b.threshold;
    }
    c.require(strict, "threshold strictly decreases from k=0 to binomial k");
    return c;
  });

  criterion(8, "monitor detects an accuracy shift", 60.0, [] {
    Check c;
    MonitorTrialConfig cfg;
    cfg.base.accuracy = 0.99;
    cfg.shifted.accuracy = 0.80;
    cfg.window = 500;
    cfg.trials = 200;
    cfg.seed = 801;
    const MonitorTrialReport r = mc_validate_monitor(cfg);
    c.require(r.reject_shifted >= 0.99, fmt("reject shifted %.3f", r.reject_shifted));
    c.require(r.accept_base >= 0.90, fmt("accept base %.3f", r.accept_base));
    return c;
  });

  criterion(9, "property suites", 120.0, [] {
    Check c;
    const auto a = props::bot_absorption(1000, 901);
    c.require(a.ok(), "bottom absorption " + std::to_string(a.checked) + " cases " + a.failure);
    const auto b = props::train_test_agreement(1000, 902);
    c.require(b.ok(), "train/test agreement " + std::to_string(b.checked) + " cases " + b.failure);
    const auto e = props::error_bound_soundness(1000, 903);
    c.require(e.ok(), "error bound soundness " + std::to_string(e.checked) + " cases, " +
                          std::to_string(e.skipped) + " outside premise " + e.failure);
    const auto u = props::count_unroll_equality(1000, 904);
    c.require(u.ok(), "count/unroll " + std::to_string(u.checked) + " cases " + u.failure);
    return c;
  });

  std::printf("summary: %d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
