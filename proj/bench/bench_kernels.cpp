// Serial and OpenMP timings of the data-parallel kernels. The range argument
// selects the policy: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "pacsketch/harness.hpp"
#include "pacsketch/listdsl_lower.hpp"
#include "pacsketch/sketcher.hpp"
#include "pacsketch/synthesizer.hpp"
#include "pacsketch/tasks.hpp"

using namespace pacsketch;

namespace {

ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

const char* kCondSum = "(fold + (filter (cond-<= (predict_int input1)) (map predict_float input2)) 0)";

const std::vector<dsl::DslExample>& cond_sum_data() {
  static const auto data =
      generate_task_data(make_task("cond_sum", TaskVariant::real), dsl::PredictorConfig{}, 20000, 1);
  return data;
}

void BM_ThresholdSamples(benchmark::State& state) {
  const auto data = prediction_valuations(dsl::PredictorConfig{}, 100000, 1);
  ir::Spec s = std::get<ir::Spec>(accuracy_assertion(0.05).node().v);
  s.threshold.reset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_threshold_samples(s, data, ir::default_registry(), policy(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(data.size()));
}

void BM_ApplicationValuations(benchmark::State& state) {
  const auto& data = cond_sum_data();
  const dsl::Prog p = dsl::parse_program(kCondSum);
  const dsl::Fill gates = dsl::permissive_fill(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsl::application_valuations(p, 2, data, gates, false, policy(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(data.size()));
}

void BM_ScoreProgram(benchmark::State& state) {
  const auto& data = cond_sum_data();
  const dsl::Prog p = dsl::parse_program(kCondSum);
  const dsl::Fill gates{{0.5, 0.6, 0.6}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_program(p, gates, data, false, policy(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(data.size()));
}

void BM_EvaluateProgram(benchmark::State& state) {
  const auto& data = cond_sum_data();
  const dsl::Prog p = dsl::parse_program(kCondSum);
  const dsl::Fill gates{{0.5, 0.6, 0.6}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_program(p, gates, data, 6.0, false, policy(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(data.size()));
}

void BM_ThresholdTrials(benchmark::State& state) {
  TrialConfig cfg;
  cfg.trials = 500;
  cfg.policy = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(mc_validate_threshold(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(cfg.trials));
}

void BM_SketchTrials(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mc_validate_sketch(1000, 0.05, 100, 1, policy(state)));
}

}  // namespace

BENCHMARK(BM_ThresholdSamples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplicationValuations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreProgram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateProgram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThresholdTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SketchTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
