#include "pacsketch/synthesizer.hpp"

#include <random>

namespace pacsketch {

using namespace dsl;

void TaskSpec::validate() const {
  if (examples.empty() && !program) throw std::invalid_argument("task: needs at least one example");
  if (!output_type) throw std::invalid_argument("task: missing output type");
  for (const auto& t : input_types) {
    if (!t) throw std::invalid_argument("task: missing input type");
  }
  for (const auto& ex : examples) {
    if (ex.inputs.size() != input_types.size()) {
      throw std::invalid_argument("task: example arity differs from the input types");
    }
  }
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("task: eps must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("task: delta must lie in (0,1)");
  if (!(err >= 0.0)) throw std::invalid_argument("task: err must be nonnegative");
  if (N && *N < 1) throw std::invalid_argument("task: N must be at least 1");
  if (depth_limit < 1) throw std::invalid_argument("task: depth limit must be at least 1");
}

bool satisfies_examples(const Prog& p, const std::vector<IoExample>& examples) {
  EvalOptions opts;
  opts.mode = Mode::train;
  try {
    for (const auto& ex : examples) {
      if (!values_equal(eval(p, ex.inputs, opts), ex.output)) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

Prog synthesize_partial_sketch(const TaskSpec& task) {
  task.validate();
  if (task.program) {
    Prog p = parse_program(*task.program);
    const TypePtr t = typecheck(p, task.input_types);
    if (!same_type(t, task.output_type)) {
      throw SynthesisError("program has type " + type_to_string(t) + ", expected " +
                           type_to_string(task.output_type));
    }
    if (!satisfies_examples(p, task.examples)) {
      throw SynthesisError("program does not reproduce the examples");
    }
    return p;
  }
  EnumerationProblem problem;
  problem.examples = task.examples;
  problem.input_types = task.input_types;
  problem.output_type = task.output_type;
  problem.components = task.components;
  problem.depth_limit = task.depth_limit;
  auto p = enumerate_smallest(problem);
  if (!p) {
    throw SynthesisError("no program of depth <= " + std::to_string(task.depth_limit) +
                         " matches the examples");
  }
  return *p;
}

std::pair<std::vector<DslExample>, std::vector<DslExample>> split_data(
    std::span<const DslExample> data, std::uint64_t seed) {
  if (data.size() < 2) throw std::invalid_argument("split_data: need at least two examples");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Fisher-Yates with a plain modulo draw keeps the split identical across
  // standard libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  const std::size_t synth = (data.size() + 1) / 2;
  std::pair<std::vector<DslExample>, std::vector<DslExample>> out;
  out.first.reserve(synth);
  out.second.reserve(data.size() - synth);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < synth ? out.first : out.second).push_back(data[order[i]]);
  }
  return out;
}

double score_program(const Prog& p, const Fill& fill, std::span<const DslExample> data, bool fast,
                     ExecPolicy policy) {
  if (data.empty()) return 0.0;
  std::vector<std::uint8_t> returned(data.size(), 0);
  EvalOptions opts;
  opts.mode = Mode::test;
  opts.fill = &fill;
  opts.fast = fast;
  parallel_for(data.size(), policy, [&](std::size_t i) {
    returned[i] = eval(p, data[i].inputs, opts).is_bot() ? 0 : 1;
  });
  std::size_t hits = 0;
  for (auto r : returned) hits += r;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

SynthesisResult synthesize(const TaskSpec& task, std::span<const DslExample> data,
                           const SynthesisOptions& opts) {
  task.validate();
  SynthesisResult out;
  out.program = opts.partial ? number_occurrences(*opts.partial) : synthesize_partial_sketch(task);
  if (!satisfies_examples(out.program, task.examples)) {
    throw SynthesisError("program does not reproduce the examples");
  }

  auto [synth, held] = split_data(data, opts.seed);
  out.synth_size = synth.size();
  out.sketch_size = held.size();

  out.program_eps = task.eps;
  if (task.N) {
    out.N = *task.N;
  } else {
    out.length = length_bound(synth, task.eps / 2.0, task.delta);
    if (!out.length->N) throw SynthesisError("not enough data to bound list lengths");
    out.N = static_cast<int>(*out.length->N);
    out.program_eps = task.eps / 2.0;
  }

  const auto eps_grid = candidate_eps(out.program, out.program_eps, out.N, opts.grid);
  const auto err_grid = candidate_errs(out.program, task.err, out.N, opts.grid);
  for (const auto& e : eps_grid) {
    for (const auto& r : err_grid) out.candidates.push_back(CandidateScore{e, r, 0.0});
  }

  DslSketchConfig cfg;
  cfg.delta = task.delta;
  cfg.N = out.N;
  cfg.rule = opts.rule;
  cfg.fast = task.fast;
  // Candidates run in parallel; each one calibrates serially.
  cfg.policy = ExecPolicy::serial;
  parallel_for(out.candidates.size(), opts.policy, [&](std::size_t i) {
    auto& c = out.candidates[i];
    const DslSketch s = sketch_dsl(out.program, c.eps, c.errs, synth, cfg);
    c.score = score_program(out.program, s.fill, synth, task.fast, ExecPolicy::serial);
  });

  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    if (out.candidates[i].score > out.candidates[out.chosen].score) out.chosen = i;
  }
  out.eps = out.candidates[out.chosen].eps;
  out.errs = out.candidates[out.chosen].errs;
  out.score = out.candidates[out.chosen].score;

  cfg.policy = opts.policy;
  out.sketch = sketch_dsl(out.program, out.eps, out.errs, held, cfg);
  return out;
}

}  // namespace pacsketch
