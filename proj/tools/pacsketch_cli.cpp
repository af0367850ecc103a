// pacsketch: command-line front end.
//
// Exit codes: 0 success / accept, 2 reject or conservative fallback, 1 error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pacsketch/allocator.hpp"
#include "pacsketch/harness.hpp"
#include "pacsketch/json_io.hpp"
#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/parallel.hpp"
#include "pacsketch/sketcher.hpp"
#include "pacsketch/synthesizer.hpp"
#include "pacsketch/tasks.hpp"
#include "pacsketch/verifier.hpp"

namespace {

using namespace pacsketch;
using io::Json;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kReject = 2;

std::vector<ir::Valuation> load_valuations(const std::string& path) {
  std::vector<Json> rows;
  if (path == "-") {
    rows = io::read_jsonl(std::cin);
  } else {
    rows = io::read_jsonl_file(path);
  }
  std::vector<ir::Valuation> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(io::valuation_from_json(r));
  return out;
}

std::vector<dsl::DslExample> load_examples(const std::string& path) {
  const auto rows = io::read_jsonl_file(path);
  std::vector<dsl::DslExample> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(io::example_from_json(r));
  return out;
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    io::write_json_file(out_path, j);
  }
}

GridSpec parse_grid(const std::string& text, bool no_search) {
  GridSpec g;
  g.single_point = no_search;
  if (text.empty()) return g;
  g.levels.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = std::stod(item);
    if (!(v > 0.0)) throw std::invalid_argument("grid levels must be positive");
    g.levels.push_back(v);
  }
  if (g.levels.empty()) throw std::invalid_argument("empty grid");
  return g;
}

// ---- sketch ----

struct SketchArgs {
  std::string program;
  std::string data;
  double delta = 0.05;
  bool k0 = false;
  std::string out;
};

int run_sketch(const SketchArgs& a) {
  const ir::Expr prog = io::program_from_json(io::read_json_file(a.program));
  ir::validate(prog, ir::default_registry());
  if (!ir::is_full_sketch(prog)) {
    std::cerr << "error: every specification needs exactly one hole; thresholds already set "
                 "cannot be guaranteed sound\n";
    return kError;
  }
  const auto data = load_valuations(a.data);
  SketchJob job;
  job.program = prog;
  job.data = data;
  job.delta = a.delta;
  job.rule = a.k0 ? MistakeRule::zero : MistakeRule::binomial;
  const SketchReport rep = sketch(job);
  emit(io::sketch_report_to_json(rep), a.out);
  if (rep.any_starved()) {
    std::cerr << "warning: not enough data for";
    for (const auto& h : rep.holes) {
      if (h.starved) std::cerr << " " << ir::path_to_string(h.path);
    }
    std::cerr << "; filled conservatively\n";
    return kReject;
  }
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string program;
  std::string data;
  double delta = 0.05;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const ir::Expr prog = io::program_from_json(io::read_json_file(a.program));
  ir::validate(prog, ir::default_registry());
  const auto data = load_valuations(a.data);
  const VerifyReport rep = verify(prog, data, a.delta);
  emit(io::verify_report_to_json(rep), a.out);
  return rep.accepted ? kOk : kReject;
}

// ---- synthesize ----

struct SynthArgs {
  std::string task;
  std::string builtin;
  std::string variant = "integer";
  std::string data;
  std::size_t generate = 0;
  double accuracy = 0.99;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<double> err;
  std::string N;
  std::optional<int> depth_limit;
  bool no_search = false;
  bool k0 = false;
  std::uint64_t seed = 0;
  std::string grid;
  std::string out;
  bool json = false;
};

int run_synthesize(const SynthArgs& a) {
  TaskSpec task;
  if (!a.task.empty()) {
    task = io::task_from_json(io::read_json_file(a.task));
  } else if (!a.builtin.empty()) {
    task = make_task(a.builtin, parse_variant(a.variant));
  } else {
    std::cerr << "error: give --task or --builtin\n";
    return kError;
  }
  if (a.eps) task.eps = *a.eps;
  if (a.delta) task.delta = *a.delta;
  if (a.err) task.err = *a.err;
  if (!a.N.empty()) {
    if (a.N == "auto") {
      task.N.reset();
    } else {
      task.N = std::stoi(a.N);
    }
  }
  if (a.depth_limit) task.depth_limit = *a.depth_limit;
  task.validate();

  std::vector<dsl::DslExample> data;
  if (!a.data.empty()) {
    data = load_examples(a.data);
  } else if (a.generate > 0) {
    dsl::PredictorConfig pc;
    pc.accuracy = a.accuracy;
    data = generate_task_data(task, pc, a.generate, dsl::split_seed(a.seed, 0));
  } else {
    std::cerr << "error: give --data or --generate\n";
    return kError;
  }

  SynthesisOptions opts;
  opts.grid = parse_grid(a.grid, a.no_search);
  opts.rule = a.k0 ? MistakeRule::zero : MistakeRule::binomial;
  opts.seed = a.seed;
  const SynthesisResult r = synthesize(task, data, opts);
  const Json j = io::synthesis_to_json(r, task);
  if (a.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << dsl::print_program(r.program) << "\n";
    std::cout << "gates:";
    for (std::size_t f = 0; f < r.sketch.fill.gates.size(); ++f) {
      std::cout << " " << dsl::occurrence_name(static_cast<int>(f)) << "="
                << io::real_to_json(r.sketch.fill.gates[f]).dump();
    }
    std::cout << "\nN=" << r.N << " score=" << r.score << " candidates=" << r.candidates.size()
              << "\n";
  }
  if (!a.out.empty()) io::write_json_file(a.out, j);
  if (r.sketch.any_starved()) {
    std::cerr << "warning: some components never return for lack of calibration data\n";
    return kReject;
  }
  return kOk;
}

// ---- monitor ----

struct MonitorArgs {
  std::string program;
  std::string follow;
  MonitorConfig cfg;
  int idle_ms = 0;
};

int run_monitor(const MonitorArgs& a) {
  a.cfg.validate();
  const ir::Expr prog = io::program_from_json(io::read_json_file(a.program));
  ir::validate(prog, ir::default_registry());
  MonitorState state;
  bool any_reject = false;
  auto handle = [&](const std::string& line) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) return;
    const Json j = io::parse_json(line);
    if (io::is_header(j)) return;
    if (auto v = monitor_record(state, a.cfg, io::valuation_from_json(j), prog)) {
      any_reject = any_reject || !v->report.accepted;
      std::cout << io::monitor_verdict_to_json(*v).dump() << std::endl;
    }
  };
  std::string line;
  if (a.follow.empty()) {
    while (std::getline(std::cin, line)) handle(line);
  } else {
    std::ifstream in(a.follow);
    if (!in) throw io::FormatError("cannot open " + a.follow);
    auto idle_since = std::chrono::steady_clock::now();
    for (;;) {
      if (std::getline(in, line)) {
        handle(line);
        idle_since = std::chrono::steady_clock::now();
        continue;
      }
      // At end of file: wait for appended lines until the idle budget runs out.
      in.clear();
      const auto idle = std::chrono::steady_clock::now() - idle_since;
      if (idle >= std::chrono::milliseconds(a.idle_ms)) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }
  return any_reject ? kReject : kOk;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string program;
  std::string task;
  int N = 3;
  double eps = 0.05;
  double err = 6.0;
  bool no_search = false;
  std::string grid;
  bool json = false;
};

int run_analyze(const AnalyzeArgs& a) {
  dsl::Prog p;
  if (!a.program.empty()) {
    p = dsl::parse_program(a.program);
  } else if (!a.task.empty()) {
    p = synthesize_partial_sketch(io::task_from_json(io::read_json_file(a.task)));
  } else {
    std::cerr << "error: give --program or --task\n";
    return kError;
  }
  const GridSpec grid = parse_grid(a.grid, a.no_search);
  const auto counts = count_all(p, a.N);
  const SymbolicError form = error_bound(p, a.N);
  const auto eps_c = candidate_eps(p, a.eps, a.N, grid);
  const auto err_c = candidate_errs(p, a.err, a.N, grid);
  const auto ops = dsl::occurrence_ops(p);

  Json j = io::header("analysis");
  j["program"] = dsl::print_program(p);
  j["N"] = a.N;
  Json occ = Json::array();
  for (std::size_t f = 0; f < ops.size(); ++f) {
    occ.push_back(Json{{"name", dsl::occurrence_name(static_cast<int>(f))},
                       {"component", dsl::op_name(ops[f])},
                       {"count", counts[f]}});
  }
  j["occurrences"] = occ;
  Json coeffs = Json::object();
  for (const auto& [f, c] : form.coeffs) coeffs[dsl::occurrence_name(f)] = c;
  j["error_coefficients"] = coeffs;
  j["error_bound"] = form.to_string();
  j["eps_candidates"] = eps_c;
  j["err_candidates"] = err_c;
  if (a.json) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "program: " << dsl::print_program(p) << "\n";
  std::cout << "counts (N=" << a.N << "):";
  for (std::size_t f = 0; f < ops.size(); ++f) {
    std::cout << " " << dsl::occurrence_name(static_cast<int>(f)) << "[" << dsl::op_name(ops[f])
              << "]=" << counts[f];
  }
  std::cout << "\nerror bound: " << form.to_string() << "\n";
  std::cout << "eps candidates: " << eps_c.size() << "\n";
  for (const auto& e : eps_c) std::cout << "  " << Json(e).dump() << "\n";
  std::cout << "err candidates: " << err_c.size() << "\n";
  for (const auto& e : err_c) std::cout << "  " << Json(e).dump() << "\n";
  return kOk;
}

// ---- validate ----

struct ValidateArgs {
  std::string suite = "all";
  std::size_t trials = 0;  // 0: suite default
  std::uint64_t seed = 1;
  bool json = false;
};

int run_validate(const ValidateArgs& a) {
  const bool all = a.suite == "all";
  auto trials = [&](std::size_t def) { return a.trials > 0 ? a.trials : def; };
  bool ok = true;
  Json j = io::header("validation");
  auto line = [&](const std::string& name, const McReport& r) {
    ok = ok && r.pass();
    j[name] = io::mc_report_to_json(r);
    if (!a.json) {
      std::printf("%-28s %s  fraction=%.4f bound=%.4f trials=%zu\n", name.c_str(),
                  r.pass() ? "PASS" : "FAIL", r.fraction, r.bound, r.trials);
    }
  };
  bool known = all;
  if (all || a.suite == "threshold") {
    known = true;
    for (const auto& d : {Distribution::uniform(), Distribution::normal(),
                          Distribution::exponential()}) {
      TrialConfig c;
      c.dist = d;
      c.trials = trials(2000);
      c.seed = a.seed;
      line("threshold " + d.name(), mc_validate_threshold(c));
    }
  }
  if (all || a.suite == "lower-bound") {
    known = true;
    for (double mu : {0.5, 0.9, 0.99}) {
      std::ostringstream name;
      name << "lower-bound mu=" << mu;
      line(name.str(), mc_validate_lower_bound(mu, 300, 0.05, trials(2000), a.seed));
    }
  }
  if (all || a.suite == "verifier") {
    known = true;
    line("verifier mu=1-2eps", mc_validate_verifier(0.9, 300, 0.05, 0.05, trials(2000), a.seed));
  }
  if (all || a.suite == "sketch") {
    known = true;
    line("sketch three-spec", mc_validate_sketch(1000, 0.05, trials(500), a.seed));
  }
  if (all || a.suite == "monitor") {
    known = true;
    MonitorTrialConfig c;
    c.shifted.accuracy = 0.8;
    c.trials = trials(200);
    c.seed = a.seed;
    const auto r = mc_validate_monitor(c);
    const bool pass = r.reject_shifted >= 0.99 && r.accept_base >= 0.90;
    ok = ok && pass;
    j["monitor"] = Json{{"trials", r.trials},
                        {"accept_base", r.accept_base},
                        {"reject_shifted", r.reject_shifted},
                        {"pass", pass}};
    if (!a.json) {
      std::printf("%-28s %s  accept(0.99)=%.3f reject(0.80)=%.3f trials=%zu\n", "monitor shift",
                  pass ? "PASS" : "FAIL", r.accept_base, r.reject_shifted, r.trials);
    }
  }
  if (a.suite == "tasks") {
    known = true;
    TaskRunConfig cfg;
    cfg.seeds = trials(10) >= 100 ? 10 : trials(10);
    cfg.seed = a.seed;
    std::vector<TaskRun> rows;
    Json runs = Json::array();
    for (const auto& name : task_names()) {
      rows.push_back(run_task(make_task(name), "integer", cfg));
      ok = ok && rows.back().max_failure <= 0.05;
      runs.push_back(io::task_run_to_json(rows.back()));
    }
    j["tasks"] = runs;
    if (!a.json) std::cout << format_table(rows);
  }
  if (!known) {
    std::cerr << "error: unknown suite '" << a.suite << "'\n";
    return kError;
  }
  if (a.json) std::cout << j.dump(2) << "\n";
  return ok ? kOk : kReject;
}

// ---- gen-data ----

struct GenArgs {
  std::string kind = "task";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  dsl::PredictorConfig predictor;
  std::string task = "cond_sum";
  std::string variant = "integer";
  std::size_t max_len = 3;
  std::size_t shift_after = 0;
  double shift_accuracy = 0.8;
  std::string out;
};

std::vector<Json> detector_rows(std::size_t n, std::uint64_t seed) {
  // A person is present 30% of the time; the detector's confidence leans
  // towards 1 when one is.
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution present(0.3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Json> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const bool person = present(rng);
    const double u = unit(rng);
    ir::Valuation v;
    v.inputs["conf"] = person ? std::pow(u, 0.25) : std::pow(u, 4.0);
    v.ground_truth["person"] = person;
    rows.push_back(io::valuation_to_json(v));
  }
  return rows;
}

int run_gen_data(const GenArgs& a) {
  a.predictor.validate();
  std::vector<Json> rows;
  std::string kind;
  if (a.kind == "images") {
    kind = "images";
    for (const auto& r : dsl::synth_predictor(a.predictor, a.n, a.seed)) {
      rows.push_back(io::record_to_json(r));
    }
  } else if (a.kind == "predictions") {
    kind = "valuations";
    auto shifted = a.predictor;
    shifted.accuracy = a.shift_accuracy;
    const std::size_t before = a.shift_after > 0 ? std::min(a.shift_after, a.n) : a.n;
    for (const auto& v : prediction_valuations(a.predictor, before, dsl::split_seed(a.seed, 0))) {
      rows.push_back(io::valuation_to_json(v));
    }
    if (before < a.n) {
      for (const auto& v :
           prediction_valuations(shifted, a.n - before, dsl::split_seed(a.seed, 1))) {
        rows.push_back(io::valuation_to_json(v));
      }
    }
  } else if (a.kind == "detector") {
    kind = "valuations";
    rows = detector_rows(a.n, a.seed);
  } else if (a.kind == "task") {
    kind = "dsl-examples";
    const TaskSpec t = make_task(a.task, parse_variant(a.variant));
    for (const auto& ex : generate_task_data(t, a.predictor, a.n, a.seed, a.max_len)) {
      rows.push_back(io::example_to_json(ex));
    }
  } else {
    std::cerr << "error: unknown kind '" << a.kind << "'\n";
    return kError;
  }
  if (a.out.empty()) {
    io::write_jsonl(std::cout, kind, rows);
  } else {
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    io::write_jsonl(out, kind, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketching, verification and synthesis of programs with learned components"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default)");

  SketchArgs sk;
  auto* cmd_sketch = app.add_subcommand("sketch", "Fill the holes of a full sketch from data");
  cmd_sketch->add_option("--program", sk.program, "Program JSON with one hole per spec")->required();
  cmd_sketch->add_option("--data", sk.data, "Valuations JSONL ('-' for stdin)")->required();
  cmd_sketch->add_option("--delta", sk.delta, "Failure probability budget")->capture_default_str();
  cmd_sketch->add_flag("--k0", sk.k0, "Use the zero-mistake bound");
  cmd_sketch->add_option("-o,--out", sk.out, "Write the report here instead of stdout");
  cmd_sketch->footer(
      "Example:\n  pacsketch sketch --program samples/detector_sketch.json --data det.jsonl");

  VerifyArgs vf;
  auto* cmd_verify = app.add_subcommand("verify", "Check a complete program against data");
  cmd_verify->add_option("--program", vf.program, "Complete program JSON")->required();
  cmd_verify->add_option("--data", vf.data, "Valuations JSONL ('-' for stdin)")->required();
  cmd_verify->add_option("--delta", vf.delta, "Failure probability budget")->capture_default_str();
  cmd_verify->add_option("-o,--out", vf.out, "Write the report here instead of stdout");
  cmd_verify->footer(
      "Example:\n  pacsketch verify --program samples/accuracy_assertion.json --data preds.jsonl");

  SynthArgs sy;
  auto* cmd_synth = app.add_subcommand("synthesize", "Synthesize a list program from examples");
  cmd_synth->add_option("--task", sy.task, "Task JSON");
  cmd_synth->add_option("--builtin", sy.builtin, "Built-in task: sum, max, cond_sum, prefix_max, cond_count");
  cmd_synth->add_option("--variant", sy.variant, "integer, real, flip or fast")->capture_default_str();
  cmd_synth->add_option("--data", sy.data, "Calibration examples JSONL");
  cmd_synth->add_option("--generate", sy.generate, "Draw this many synthetic examples instead");
  cmd_synth->add_option("--accuracy", sy.accuracy, "Predictor accuracy for --generate")->capture_default_str();
  cmd_synth->add_option("--eps", sy.eps, "Failure rate bound (default 0.05)");
  cmd_synth->add_option("--delta", sy.delta, "Confidence budget (default 0.05)");
  cmd_synth->add_option("--err", sy.err, "Output error tolerance (default 6)");
  cmd_synth->add_option("--N", sy.N, "List length bound, or 'auto' (default 3)");
  cmd_synth->add_option("--depth-limit", sy.depth_limit, "Enumeration depth limit (default 5)");
  cmd_synth->add_flag("--no-search", sy.no_search, "Only the allocation (1, ..., 1)");
  cmd_synth->add_flag("--k0", sy.k0, "Use the zero-mistake bound");
  cmd_synth->add_option("--seed", sy.seed, "Seed for the data split")->capture_default_str();
  cmd_synth->add_option("--grid", sy.grid, "Comma-separated grid levels (default 1,3,5)");
  cmd_synth->add_option("-o,--out", sy.out, "Write the result JSON here");
  cmd_synth->add_flag("--json", sy.json, "Print the result JSON instead of a summary");
  cmd_synth->footer(
      "Examples:\n  pacsketch synthesize --task samples/cond_sum_real.task.json --generate 5000\n"
      "  pacsketch synthesize --builtin cond_sum --data cond_sum.jsonl --no-search");

  MonitorArgs mo;
  auto* cmd_monitor = app.add_subcommand("monitor", "Re-verify a program over a labelled stream");
  cmd_monitor->add_option("--program", mo.program, "Complete program JSON")->required();
  cmd_monitor->add_option("--follow", mo.follow, "Read this file instead of stdin");
  cmd_monitor->add_option("--idle-ms", mo.idle_ms, "With --follow, wait this long for new lines")
      ->capture_default_str();
  cmd_monitor->add_option("--refresh", mo.cfg.refresh_every, "Examples between verdicts")->capture_default_str();
  cmd_monitor->add_option("--min-window", mo.cfg.min_window, "Examples before the first verdict")->capture_default_str();
  cmd_monitor->add_option("--max-age", mo.cfg.max_age, "Window length in examples")->capture_default_str();
  cmd_monitor->add_option("--delta", mo.cfg.delta, "Failure probability per verdict")->capture_default_str();
  cmd_monitor->footer(
      "Example:\n  pacsketch gen-data --kind predictions --n 2000 --shift-after 1000 |\n"
      "    pacsketch monitor --program samples/accuracy_assertion.json --min-window 500 --max-age 500");

  AnalyzeArgs an;
  auto* cmd_analyze = app.add_subcommand("analyze", "Occurrence counts, error bound and budget candidates");
  cmd_analyze->add_option("--program", an.program, "Program text");
  cmd_analyze->add_option("--task", an.task, "Task JSON (its program is enumerated)");
  cmd_analyze->add_option("--N", an.N, "List length bound")->capture_default_str();
  cmd_analyze->add_option("--eps", an.eps, "Failure rate bound")->capture_default_str();
  cmd_analyze->add_option("--err", an.err, "Output error tolerance")->capture_default_str();
  cmd_analyze->add_flag("--no-search", an.no_search, "Only the allocation (1, ..., 1)");
  cmd_analyze->add_option("--grid", an.grid, "Comma-separated grid levels");
  cmd_analyze->add_flag("--json", an.json, "JSON output");
  cmd_analyze->footer(
      "Example:\n  pacsketch analyze --program \"(fold + (filter (cond-<= (predict_int input1)) "
      "(map predict_float input2)) 0)\"");

  ValidateArgs va;
  auto* cmd_validate = app.add_subcommand("validate", "Monte Carlo checks of the guarantees");
  cmd_validate->add_option("--suite", va.suite,
                           "all, threshold, lower-bound, verifier, sketch, monitor or tasks")
      ->capture_default_str();
  cmd_validate->add_option("--trials", va.trials, "Trials per check (seeds for tasks)");
  cmd_validate->add_option("--seed", va.seed, "Base seed")->capture_default_str();
  cmd_validate->add_flag("--json", va.json, "JSON output");
  cmd_validate->footer("Examples:\n  pacsketch validate\n  pacsketch validate --suite tasks --trials 3");

  GenArgs ge;
  auto* cmd_gen = app.add_subcommand("gen-data", "Write synthetic datasets as JSONL");
  cmd_gen->add_option("--kind", ge.kind, "task, images, predictions or detector")->capture_default_str();
  cmd_gen->add_option("--n", ge.n, "Number of rows")->capture_default_str();
  cmd_gen->add_option("--seed", ge.seed, "Seed")->capture_default_str();
  cmd_gen->add_option("--accuracy", ge.predictor.accuracy, "Predictor accuracy")->capture_default_str();
  cmd_gen->add_option("--fast-accuracy", ge.predictor.fast_accuracy, "Fast predictor accuracy")->capture_default_str();
  cmd_gen->add_option("--flip-rate", ge.predictor.flip_rate, "Fraction of upside-down images")->capture_default_str();
  cmd_gen->add_option("--task", ge.task, "Task for --kind task")->capture_default_str();
  cmd_gen->add_option("--variant", ge.variant, "Task variant")->capture_default_str();
  cmd_gen->add_option("--max-len", ge.max_len, "Longest input list")->capture_default_str();
  cmd_gen->add_option("--shift-after", ge.shift_after, "Predictions: switch accuracy after this many rows");
  cmd_gen->add_option("--shift-accuracy", ge.shift_accuracy, "Accuracy after the shift")->capture_default_str();
  cmd_gen->add_option("-o,--out", ge.out, "Output file (default stdout)");
  cmd_gen->footer(
      "Examples:\n  pacsketch gen-data --kind task --task cond_sum --variant real --n 5000 -o cs.jsonl\n"
      "  pacsketch gen-data --kind detector --n 1000 -o det.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  set_thread_count(threads);
  try {
    if (cmd_sketch->parsed()) return run_sketch(sk);
    if (cmd_verify->parsed()) return run_verify(vf);
    if (cmd_synth->parsed()) return run_synthesize(sy);
    if (cmd_monitor->parsed()) return run_monitor(mo);
    if (cmd_analyze->parsed()) return run_analyze(an);
    if (cmd_validate->parsed()) return run_validate(va);
    if (cmd_gen->parsed()) return run_gen_data(ge);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
