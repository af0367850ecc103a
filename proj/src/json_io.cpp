#include "pacsketch/json_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pacsketch/allocator.hpp"
#include "pacsketch/tasks.hpp"

namespace pacsketch::io {

using namespace dsl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double need_real(const Json& j, const char* key) { return real_from_json(need(j, key)); }

std::string mode_name(ir::GuaranteeMode m) {
  return m == ir::GuaranteeMode::conditional ? "cond" : "implies";
}

ir::GuaranteeMode mode_from(const std::string& s) {
  if (s == "cond" || s == "conditional" || s == "|") return ir::GuaranteeMode::conditional;
  if (s == "implies" || s == "implication" || s == "=>") return ir::GuaranteeMode::implication;
  throw FormatError("unknown guarantee mode '" + s + "'");
}

Json prediction_to_json(const Prediction& p) {
  return Json{{"value", p.value}, {"confidence", p.confidence}};
}

Prediction prediction_from_json(const Json& j) {
  return Prediction{need_real(j, "value"), need_real(j, "confidence")};
}

Json reals(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(real_to_json(x));
  return out;
}

}  // namespace

Json header(const std::string& kind) { return Json{{"schema", kSchema}, {"kind", kind}}; }

bool is_header(const Json& j) { return j.is_object() && j.contains("schema"); }

Json real_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw FormatError("expected a number, got " + j.dump());
}

Json const_to_json(const ir::Const& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ir::Token>) {
          return v.text;
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return Json{{"real", real_to_json(v)}};
        } else {
          return v;
        }
      },
      c);
}

ir::Const const_from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return ir::Token{j.get<std::string>()};
  if (j.is_object() && j.contains("real")) return real_from_json(j.at("real"));
  throw FormatError("unsupported constant " + j.dump());
}

Json expr_to_json(const ir::Expr& e) {
  if (e.empty()) throw FormatError("empty expression");
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ir::Constant>) {
          return Json{{"const", const_to_json(n.value)}};
        } else if constexpr (std::is_same_v<T, ir::InputVar>) {
          return Json{{"input", n.name}};
        } else if constexpr (std::is_same_v<T, ir::GroundTruthVar>) {
          return Json{{"truth", n.name}};
        } else if constexpr (std::is_same_v<T, ir::Apply>) {
          Json args = Json::array();
          for (const auto& a : n.args) args.push_back(expr_to_json(a));
          return Json{{"apply", n.component}, {"args", args}};
        } else {
          Json s;
          s["score"] = expr_to_json(n.score);
          s["threshold"] = n.threshold ? real_to_json(*n.threshold) : Json("??");
          s["q"] = expr_to_json(n.spec);
          s["eps"] = n.eps ? real_to_json(*n.eps) : Json("??");
          s["mode"] = mode_name(n.mode);
          return Json{{"spec", s}};
        }
      },
      e.node().v);
}

ir::Expr expr_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("expression must be an object: " + j.dump());
  if (j.contains("const")) return ir::constant(const_from_json(j.at("const")));
  if (j.contains("input")) return ir::input(j.at("input").get<std::string>());
  if (j.contains("truth")) return ir::truth(j.at("truth").get<std::string>());
  if (j.contains("apply")) {
    std::vector<ir::Expr> args;
    if (j.contains("args")) {
      for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
    }
    return ir::apply(j.at("apply").get<std::string>(), std::move(args));
  }
  if (j.contains("spec")) {
    const Json& s = j.at("spec");
    auto hole_or_real = [&](const char* key) -> std::optional<double> {
      const Json& v = need(s, key);
      if (v.is_string() && v.get<std::string>() == "??") return std::nullopt;
      return real_from_json(v);
    };
    const std::string mode = s.contains("mode") ? s.at("mode").get<std::string>() : "cond";
    try {
      return ir::spec(expr_from_json(need(s, "score")), hole_or_real("threshold"),
                      expr_from_json(need(s, "q")), hole_or_real("eps"), mode_from(mode));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  throw FormatError("unrecognised expression " + j.dump());
}

Json valuation_to_json(const ir::Valuation& v) {
  Json in = Json::object();
  for (const auto& [k, c] : v.inputs) in[k] = const_to_json(c);
  Json gt = Json::object();
  for (const auto& [k, c] : v.ground_truth) gt[k] = const_to_json(c);
  return Json{{"inputs", in}, {"ground_truth", gt}};
}

ir::Valuation valuation_from_json(const Json& j) {
  ir::Valuation v;
  if (!j.is_object()) throw FormatError("valuation must be an object");
  if (j.contains("inputs")) {
    for (const auto& [k, c] : j.at("inputs").items()) v.inputs[k] = const_from_json(c);
  }
  if (j.contains("ground_truth")) {
    for (const auto& [k, c] : j.at("ground_truth").items()) v.ground_truth[k] = const_from_json(c);
  }
  return v;
}

Json record_to_json(const ImageRecord& r) {
  Json j;
  j["id"] = r.id;
  if (r.truth_int) j["truth_int"] = *r.truth_int;
  if (r.truth_float) j["truth_float"] = *r.truth_float;
  j["truth_flipped"] = r.truth_flipped;
  j["pred"] = prediction_to_json(r.pred);
  if (r.pred_fast) j["pred_fast"] = prediction_to_json(*r.pred_fast);
  if (r.pred_flipped) j["pred_flipped"] = prediction_to_json(*r.pred_flipped);
  j["flip_pred"] = Json{{"flipped", r.flip_pred.flipped}, {"confidence", r.flip_pred.confidence}};
  return j;
}

ImageRecord record_from_json(const Json& j) {
  ImageRecord r;
  if (j.contains("id")) r.id = j.at("id").get<std::string>();
  if (j.contains("truth_int")) r.truth_int = j.at("truth_int").get<std::int64_t>();
  if (j.contains("truth_float")) r.truth_float = real_from_json(j.at("truth_float"));
  if (!r.truth_int && !r.truth_float) throw FormatError("image record " + r.id + " has no truth");
  if (j.contains("truth_flipped")) r.truth_flipped = j.at("truth_flipped").get<bool>();
  r.pred = prediction_from_json(need(j, "pred"));
  if (j.contains("pred_fast")) r.pred_fast = prediction_from_json(j.at("pred_fast"));
  if (j.contains("pred_flipped")) r.pred_flipped = prediction_from_json(j.at("pred_flipped"));
  if (j.contains("flip_pred")) {
    const Json& f = j.at("flip_pred");
    r.flip_pred.flipped = need(f, "flipped").get<bool>();
    r.flip_pred.confidence = need_real(f, "confidence");
  }
  return r;
}

Json value_to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bot>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return real_to_json(x);
        } else if constexpr (std::is_same_v<T, ImageRef>) {
          return Json{{"image", record_to_json(*x.record)}};
        } else if constexpr (std::is_same_v<T, ListV>) {
          Json out = Json::array();
          for (const auto& item : x.items) out.push_back(value_to_json(item));
          return out;
        } else if constexpr (std::is_same_v<T, Closure>) {
          throw FormatError("function values cannot be serialised");
        } else {
          return x;
        }
      },
      v.v);
}

Value value_from_json(const Json& j) {
  if (j.is_null()) return bot();
  if (j.is_boolean()) return make_bool(j.get<bool>());
  if (j.is_number_integer()) return make_int(j.get<std::int64_t>());
  if (j.is_number_float() || j.is_string()) return make_float(real_from_json(j));
  if (j.is_array()) {
    std::vector<Value> items;
    for (const auto& x : j) items.push_back(value_from_json(x));
    return make_list(std::move(items));
  }
  if (j.is_object() && j.contains("image")) {
    return make_image(std::make_shared<const ImageRecord>(record_from_json(j.at("image"))));
  }
  if (j.is_object() && j.contains("digit")) {
    return make_image(truth_image(j.at("digit").get<std::int64_t>()));
  }
  throw FormatError("unsupported value " + j.dump());
}

Json example_to_json(const DslExample& ex) {
  Json in = Json::array();
  for (const auto& v : ex.inputs) in.push_back(value_to_json(v));
  return Json{{"inputs", in}};
}

DslExample example_from_json(const Json& j) {
  DslExample ex;
  for (const auto& v : need(j, "inputs")) ex.inputs.push_back(value_from_json(v));
  return ex;
}

Json task_to_json(const TaskSpec& t) {
  Json j = header("task");
  j["name"] = t.name;
  Json inputs = Json::array();
  for (const auto& ty : t.input_types) inputs.push_back(type_to_string(ty));
  j["input_types"] = inputs;
  j["output_type"] = type_to_string(t.output_type);
  Json comps = Json::array();
  for (Op op : t.components) comps.push_back(op_name(op));
  j["components"] = comps;
  Json examples = Json::array();
  for (const auto& ex : t.examples) {
    Json in = Json::array();
    for (const auto& v : ex.inputs) in.push_back(value_to_json(v));
    examples.push_back(Json{{"inputs", in}, {"output", value_to_json(ex.output)}});
  }
  j["examples"] = examples;
  j["eps"] = t.eps;
  j["delta"] = t.delta;
  j["err"] = t.err;
  j["N"] = t.N ? Json(*t.N) : Json("auto");
  j["fast"] = t.fast;
  j["depth_limit"] = t.depth_limit;
  if (t.program) j["program"] = *t.program;
  return j;
}

TaskSpec task_from_json(const Json& j) {
  TaskSpec t;
  try {
    if (j.contains("builtin")) {
      const std::string variant = j.contains("variant") ? j.at("variant").get<std::string>()
                                                        : std::string("integer");
      t = make_task(j.at("builtin").get<std::string>(), parse_variant(variant));
    }
    if (j.contains("name")) t.name = j.at("name").get<std::string>();
    if (j.contains("input_types")) {
      t.input_types.clear();
      for (const auto& s : j.at("input_types")) t.input_types.push_back(parse_type(s.get<std::string>()));
    }
    if (j.contains("output_type")) t.output_type = parse_type(j.at("output_type").get<std::string>());
    if (j.contains("components")) {
      t.components.clear();
      for (const auto& s : j.at("components")) {
        const auto op = op_from_name(s.get<std::string>());
        if (!op) throw FormatError("unknown component '" + s.get<std::string>() + "'");
        t.components.push_back(*op);
      }
    }
    if (j.contains("examples")) {
      t.examples.clear();
      for (const auto& ex : j.at("examples")) {
        IoExample io;
        for (const auto& v : need(ex, "inputs")) io.inputs.push_back(value_from_json(v));
        io.output = value_from_json(need(ex, "output"));
        t.examples.push_back(std::move(io));
      }
    }
    if (j.contains("eps")) t.eps = real_from_json(j.at("eps"));
    if (j.contains("delta")) t.delta = real_from_json(j.at("delta"));
    if (j.contains("err")) t.err = real_from_json(j.at("err"));
    if (j.contains("N")) {
      const Json& n = j.at("N");
      if (n.is_string() && n.get<std::string>() == "auto") {
        t.N.reset();
      } else {
        t.N = n.get<int>();
      }
    }
    if (j.contains("fast")) t.fast = j.at("fast").get<bool>();
    if (j.contains("depth_limit")) t.depth_limit = j.at("depth_limit").get<int>();
    if (j.contains("program")) t.program = j.at("program").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("task: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("task: ") + e.what());
  }
  return t;
}

Json program_to_json(const ir::Expr& e) {
  Json j = header("program");
  j["expr"] = expr_to_json(e);
  return j;
}

ir::Expr program_from_json(const Json& j) {
  if (j.is_object() && j.contains("expr")) return expr_from_json(j.at("expr"));
  return expr_from_json(j);
}

Json mistake_budget_to_json(const MistakeBudget& k) {
  if (!k) return nullptr;
  return *k;
}

Json sketch_report_to_json(const SketchReport& r) {
  Json j = header("sketch-report");
  j["program"] = expr_to_json(r.completed);
  Json holes = Json::array();
  for (const auto& h : r.holes) {
    Json x;
    x["path"] = ir::path_to_string(h.path);
    x["kind"] = h.kind == HoleKind::threshold ? "threshold" : "eps";
    x["value"] = real_to_json(h.value);
    x["n"] = h.n;
    if (h.kind == HoleKind::threshold) {
      x["k"] = mistake_budget_to_json(h.k);
      x["spec_eps"] = h.spec_eps;
    } else {
      x["nu_hat"] = h.nu_hat;
    }
    x["delta_share"] = h.delta_share;
    x["starved"] = h.starved;
    holes.push_back(x);
  }
  j["holes"] = holes;
  j["starved"] = r.any_starved();
  return j;
}

namespace {

Json spec_verdicts(const std::vector<SpecVerdict>& specs) {
  Json out = Json::array();
  for (const auto& s : specs) {
    Json x;
    x["path"] = ir::path_to_string(s.path);
    x["mode"] = mode_name(s.mode);
    x["eps"] = s.eps;
    x["n"] = s.n;
    x["violations"] = s.violations;
    x["k"] = mistake_budget_to_json(s.k);
    x["pass"] = s.pass;
    out.push_back(x);
  }
  return out;
}

}  // namespace

Json verify_report_to_json(const VerifyReport& r) {
  Json j = header("verify-report");
  j["accepted"] = r.accepted;
  j["delta_share"] = r.delta_share;
  j["specs"] = spec_verdicts(r.specs);
  return j;
}

Json monitor_verdict_to_json(const MonitorVerdict& v) {
  Json j;
  j["timestamp"] = v.timestamp;
  j["window"] = v.window_size;
  j["accepted"] = v.report.accepted;
  j["specs"] = spec_verdicts(v.report.specs);
  return j;
}

Json dsl_sketch_to_json(const DslSketch& s) {
  Json j;
  j["gates"] = reals(s.fill.gates);
  j["unrolled"] = s.unrolled;
  j["delta_share"] = s.delta_share;
  Json occ = Json::array();
  for (const auto& r : s.records) {
    Json x;
    x["name"] = occurrence_name(r.occ);
    x["component"] = op_name(r.op);
    x["count"] = r.count;
    x["eps"] = r.eps;
    if (r.op == Op::PredictFloat) x["err"] = r.err;
    x["n"] = r.n;
    x["violations"] = r.violations;
    x["k"] = mistake_budget_to_json(r.k);
    x["threshold"] = real_to_json(r.threshold);
    x["gate"] = real_to_json(r.gate);
    x["starved"] = r.starved;
    occ.push_back(x);
  }
  j["occurrences"] = occ;
  j["starved"] = s.any_starved();
  return j;
}

Json synthesis_to_json(const SynthesisResult& r, const TaskSpec& task) {
  Json j = header("synthesis-result");
  j["task"] = task.name;
  j["program"] = print_program(r.program);
  Json inputs = Json::array();
  for (const auto& ty : task.input_types) inputs.push_back(type_to_string(ty));
  j["input_types"] = inputs;
  j["output_type"] = type_to_string(task.output_type);
  j["eps"] = task.eps;
  j["delta"] = task.delta;
  j["err"] = task.err;
  j["fast"] = task.fast;
  j["N"] = r.N;
  if (r.length) {
    j["length_bound"] = Json{{"threshold", real_to_json(r.length->threshold)},
                             {"k", mistake_budget_to_json(r.length->k)},
                             {"n", r.length->n}};
  }
  j["program_eps"] = r.program_eps;
  j["error_bound"] = error_bound(r.program, r.N).to_string();
  j["eps_alloc"] = reals(r.eps);
  j["err_alloc"] = reals(r.errs);
  j["score"] = r.score;
  j["chosen"] = r.chosen;
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    cands.push_back(Json{{"eps", reals(c.eps)}, {"errs", reals(c.errs)}, {"score", c.score}});
  }
  j["candidates"] = cands;
  j["synth_size"] = r.synth_size;
  j["sketch_size"] = r.sketch_size;
  j["sketch"] = dsl_sketch_to_json(r.sketch);
  return j;
}

Json metrics_to_json(const MetricsReport& m) {
  Json j;
  j["n"] = m.n;
  j["bots"] = m.bots;
  j["failures"] = m.failures;
  j["mismatches"] = m.mismatches;
  j["length_mismatches"] = m.length_mismatches;
  j["bot_rate"] = m.bot_rate;
  j["failure_rate"] = m.failure_rate;
  j["mismatch_rate"] = m.mismatch_rate;
  j["bot_ci"] = Json::array({m.bot_ci.lo, m.bot_ci.hi});
  j["failure_ci"] = Json::array({m.failure_ci.lo, m.failure_ci.hi});
  return j;
}

Json mc_report_to_json(const McReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["fraction"] = r.fraction;
  j["slack"] = r.slack;
  j["bound"] = r.bound;
  j["mean_coverage"] = r.mean_coverage;
  j["pass"] = r.pass();
  return j;
}

Json task_run_to_json(const TaskRun& r) {
  Json j;
  j["task"] = r.task;
  j["variant"] = r.variant;
  j["program"] = r.program;
  j["mean_bot"] = r.mean_bot;
  j["mean_failure"] = r.mean_failure;
  j["max_failure"] = r.max_failure;
  j["seconds"] = r.seconds;
  Json seeds = Json::array();
  for (const auto& s : r.runs) {
    Json x;
    x["seed"] = s.seed;
    x["score"] = s.result.score;
    x["gates"] = reals(s.result.sketch.fill.gates);
    x["metrics"] = metrics_to_json(s.metrics);
    seeds.push_back(x);
  }
  j["seeds"] = seeds;
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<Json> read_jsonl(std::istream& in) {
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (is_header(j)) continue;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<Json> read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_jsonl(in);
}

void write_jsonl(std::ostream& out, const std::string& kind, const std::vector<Json>& rows) {
  out << header(kind).dump() << "\n";
  for (const auto& r : rows) out << r.dump() << "\n";
}

}  // namespace pacsketch::io
