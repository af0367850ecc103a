#include "pacsketch/listdsl_lower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "pacsketch/allocator.hpp"
#include "pacsketch/sketcher.hpp"

namespace pacsketch::dsl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ir::Expr in(const char* name) { return ir::input(name); }
ir::Expr gt(const char* name) { return ir::truth(name); }

ir::Const number_const(Op op, double v) {
  if (op == Op::PredictInt) return static_cast<std::int64_t>(v);
  return v;
}

}  // namespace

ir::Expr annotation_expr(Op op, double err) {
  switch (op) {
    case Op::PredictInt:
      return ir::apply("eq", {in(kVarPred), gt(kVarPredTrue)});
    case Op::PredictFloat:
      return ir::apply("le", {ir::apply("abs", {ir::apply("sub", {in(kVarPred), gt(kVarPredTrue)})}),
                              ir::constant(err)});
    case Op::CondLe:
    case Op::CondGe: {
      const char* cmp = op == Op::CondLe ? "le" : "ge";
      return ir::apply("eq", {ir::apply(cmp, {in(kVarY1), in(kVarY2)}),
                              ir::apply(cmp, {gt(kVarY1True), gt(kVarY2True)})});
    }
    case Op::CondFlip:
      return ir::apply("eq", {in(kVarFlip), gt(kVarFlipTrue)});
    default:
      throw std::invalid_argument("annotation_expr: '" + op_name(op) + "' is not annotated");
  }
}

ir::Expr lower_to_sketch_ir(const Prog& p, const std::vector<double>& eps,
                            const std::vector<double>& errs) {
  const auto ops = occurrence_ops(p);
  if (eps.size() < ops.size()) throw std::invalid_argument("lower: eps hole left unassigned");
  std::vector<ir::Expr> specs;
  for (std::size_t f = 0; f < ops.size(); ++f) {
    double err = 0.0;
    if (ops[f] == Op::PredictFloat) {
      if (errs.size() <= f) throw std::invalid_argument("lower: error hole left unassigned");
      err = errs[f];
    }
    const ir::Expr q =
        ir::apply("or", {gt(kVarDesync), ir::apply("not", {annotation_expr(ops[f], err)})});
    specs.push_back(ir::spec(in(kVarScore), std::nullopt, q, std::min(eps[f], 1.0),
                             ir::GuaranteeMode::implication));
  }
  if (specs.empty()) return ir::constant(true);
  ir::Expr chain = specs.back();
  for (std::size_t i = specs.size() - 1; i-- > 0;) chain = ir::apply("and", {specs[i], chain});
  return chain;
}

ir::Path occurrence_path(std::size_t occ, std::size_t occurrences) {
  if (occ >= occurrences) throw std::out_of_range("occurrence_path: no such occurrence");
  ir::Path path(occ, 1);
  if (occ + 1 < occurrences) path.push_back(0);
  return path;
}

namespace {

ir::Valuation pair_valuation(const AppEvent& t, const AppEvent* r) {
  ir::Valuation v;
  const AppEvent& truth = r != nullptr ? *r : t;
  v.inputs[kVarScore] = t.score;
  v.ground_truth[kVarDesync] = r == nullptr;
  switch (t.op) {
    case Op::PredictInt:
    case Op::PredictFloat:
      v.inputs[kVarPred] = number_const(t.op, t.value);
      v.ground_truth[kVarPredTrue] = number_const(t.op, truth.value);
      break;
    case Op::CondLe:
    case Op::CondGe:
      v.inputs[kVarY1] = t.a1;
      v.inputs[kVarY2] = t.a2;
      v.ground_truth[kVarY1True] = truth.a1;
      v.ground_truth[kVarY2True] = truth.a2;
      break;
    case Op::CondFlip:
      v.inputs[kVarFlip] = t.value != 0.0;
      v.ground_truth[kVarFlipTrue] = truth.value != 0.0;
      break;
    default:
      break;
  }
  return v;
}

std::vector<ir::Valuation> example_valuations(const Prog& p, int occ, const DslExample& ex,
                                              const Fill& gates, bool fast) {
  std::vector<AppEvent> test_trace;
  std::vector<AppEvent> train_trace;
  EvalOptions test;
  test.mode = Mode::test;
  test.fill = &gates;
  test.fast = fast;
  test.trace = &test_trace;
  eval(p, ex.inputs, test);
  EvalOptions train;
  train.mode = Mode::train;
  train.trace = &train_trace;
  eval(p, ex.inputs, train);

  std::vector<ir::Valuation> out;
  bool in_sync = true;
  for (std::size_t i = 0; i < test_trace.size(); ++i) {
    in_sync = in_sync && i < train_trace.size() && train_trace[i].occ == test_trace[i].occ;
    if (test_trace[i].occ != occ) continue;
    out.push_back(pair_valuation(test_trace[i], in_sync ? &train_trace[i] : nullptr));
  }
  return out;
}

int order_rank(Op op) {
  switch (op) {
    case Op::CondFlip:
      return 0;
    case Op::PredictInt:
    case Op::PredictFloat:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

std::vector<ir::Valuation> application_valuations(const Prog& p, int occ,
                                                  std::span<const DslExample> data,
                                                  const Fill& gates, bool fast,
                                                  ExecPolicy policy) {
  std::vector<std::vector<ir::Valuation>> per_example(data.size());
  parallel_for(data.size(), policy, [&](std::size_t i) {
    per_example[i] = example_valuations(p, occ, data[i], gates, fast);
  });
  std::vector<ir::Valuation> out;
  for (auto& vs : per_example) {
    for (auto& v : vs) out.push_back(std::move(v));
  }
  return out;
}

std::vector<int> calibration_order(const Prog& p) {
  const auto ops = occurrence_ops(p);
  std::vector<int> order(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return order_rank(ops[a]) < order_rank(ops[b]); });
  return order;
}

bool DslSketch::any_starved() const {
  return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.starved; });
}

DslSketch sketch_dsl(const Prog& p, const std::vector<double>& eps,
                     const std::vector<double>& errs, std::span<const DslExample> data,
                     const DslSketchConfig& cfg) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const auto ops = occurrence_ops(p);
  const auto counts = count_all(p, cfg.N);
  const ir::Expr lowered = lower_to_sketch_ir(p, eps, errs);

  DslSketch out;
  out.fill = permissive_fill(ops.size());
  for (auto c : counts) out.unrolled += c;
  if (out.unrolled == 0) return out;
  out.delta_share = cfg.delta / static_cast<double>(out.unrolled);

  for (int occ : calibration_order(p)) {
    OccurrenceRecord rec;
    rec.occ = occ;
    rec.op = ops[occ];
    rec.count = counts[occ];
    rec.eps = eps[occ];
    rec.err = rec.op == Op::PredictFloat ? errs[occ] : 0.0;

    const auto vals = application_valuations(p, occ, data, out.fill, cfg.fast, cfg.policy);
    const ir::Spec& spec = ir::spec_at(lowered, occurrence_path(occ, ops.size()));
    const ScoreSample z = build_threshold_samples(spec, vals, ir::default_registry(), cfg.policy);
    rec.n = z.size();
    for (double s : z) rec.violations += s != -kInf ? 1 : 0;

    if (rec.eps >= 1.0) {
      rec.threshold = -kInf;
    } else {
      EstimatorConfig ecfg;
      ecfg.epsilon = rec.eps;
      ecfg.delta = out.delta_share;
      ecfg.rule = cfg.rule;
      const ThresholdEstimate est = threshold_estimate_detailed(z, ecfg);
      rec.threshold = est.threshold;
      rec.k = est.k;
    }
    rec.starved = rec.threshold == kInf;
    // Abstain iff score <= t, so return iff score >= the next double above t.
    rec.gate = std::isfinite(rec.threshold) ? std::nextafter(rec.threshold, kInf) : rec.threshold;
    out.fill.gates[occ] = rec.gate;
    out.records.push_back(rec);
  }
  return out;
}

namespace {

std::size_t longest(const Value& v) {
  const auto* l = std::get_if<ListV>(&v.v);
  if (l == nullptr) return 0;
  std::size_t best = l->items.size();
  for (const auto& item : l->items) best = std::max(best, longest(item));
  return best;
}

void emit(const Prog& p, int N, std::vector<int>& out) {
  switch (p->kind) {
    case NodeKind::Input:
    case NodeKind::IntConst:
      return;
    case NodeKind::Comp:
      if (p->occ >= 0) out.push_back(p->occ);
      return;
    case NodeKind::Fold:
      emit(p->kids[1], N, out);
      emit(p->kids[2], N, out);
      for (int i = 0; i < N; ++i) emit(p->kids[0], N, out);
      return;
    case NodeKind::Map:
    case NodeKind::Filter:
      emit(p->kids[1], N, out);
      for (int i = 0; i < N; ++i) emit(p->kids[0], N, out);
      return;
    default:
      for (const auto& k : p->kids) emit(k, N, out);
  }
}

}  // namespace

std::size_t max_list_length(const DslExample& ex) {
  std::size_t best = 0;
  for (const auto& v : ex.inputs) best = std::max(best, longest(v));
  return best;
}

LengthBound length_bound(std::span<const DslExample> data, double eps_half, double delta_share) {
  if (data.empty()) throw std::invalid_argument("length_bound: no data");
  ScoreSample z;
  z.reserve(data.size());
  for (const auto& ex : data) z.push_back(static_cast<double>(max_list_length(ex)));
  EstimatorConfig cfg;
  cfg.epsilon = eps_half;
  cfg.delta = delta_share;
  const ThresholdEstimate est = threshold_estimate_detailed(z, cfg);
  LengthBound out;
  out.threshold = est.threshold;
  out.k = est.k;
  out.n = est.n;
  if (std::isfinite(est.threshold)) {
    out.N = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(est.threshold)));
  }
  return out;
}

std::vector<std::pair<int, std::size_t>> unroll_occurrences(const Prog& p, int N) {
  if (N < 1) throw std::invalid_argument("unroll_occurrences: N must be at least 1");
  std::vector<int> emitted;
  emit(p, N, emitted);
  std::map<int, std::size_t> tally;
  for (std::size_t f = 0; f < occurrence_count(p); ++f) tally[static_cast<int>(f)] = 0;
  for (int occ : emitted) ++tally[occ];
  return {tally.begin(), tally.end()};
}

}  // namespace pacsketch::dsl
