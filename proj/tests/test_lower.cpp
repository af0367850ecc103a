#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pacsketch/allocator.hpp"
#include "pacsketch/listdsl_lower.hpp"
#include "pacsketch/tasks.hpp"

using namespace pacsketch;
using namespace pacsketch::dsl;

namespace {

const char* kCondSum =
    "(fold + (filter (cond-<= (predict_int input1)) (map predict_float input2)) 0)";

std::vector<DslExample> lists_of_lengths(const std::vector<std::size_t>& lens) {
  std::vector<DslExample> out;
  for (std::size_t n : lens) {
    std::vector<Value> items;
    for (std::size_t i = 0; i < n; ++i) items.push_back(make_image(truth_image(1)));
    out.push_back(DslExample{{make_list(std::move(items))}});
  }
  return out;
}

}  // namespace

TEST_CASE("lowering builds one implication spec per occurrence") {
  const Prog p = parse_program(kCondSum);
  const std::vector<double> eps{0.01, 0.02, 0.03};
  const std::vector<double> errs{0.0, 0.0, 2.0};
  const ir::Expr e = lower_to_sketch_ir(p, eps, errs);
  const auto parts = ir::collect_specs(e);
  CHECK(parts.threshold_holed.size() == 3);
  CHECK(ir::is_full_sketch(e));
  for (std::size_t occ = 0; occ < 3; ++occ) {
    const ir::Spec& s = ir::spec_at(e, occurrence_path(occ, 3));
    CHECK(s.mode == ir::GuaranteeMode::implication);
    CHECK(*s.eps == doctest::Approx(eps[occ]));
    CHECK_FALSE(s.threshold.has_value());
  }
}

TEST_CASE("annotation of predict_float respects the error budget") {
  const ir::Expr a = annotation_expr(Op::PredictFloat, 0.5);
  ir::Valuation v;
  v.inputs[kVarPred] = 3.3;
  v.ground_truth[kVarPredTrue] = 3.0;
  CHECK(ir::to_bool(ir::eval_train(a, v, ir::default_registry())));
  v.inputs[kVarPred] = 3.7;
  CHECK_FALSE(ir::to_bool(ir::eval_train(a, v, ir::default_registry())));
}

TEST_CASE("unrolled multiplicities match the count analysis") {
  for (const char* text :
       {kCondSum, "(fold + (map predict_int input1) 0)",
        "(fold max (slice (map predict_int input2) 0 (predict_int input1)) 0)",
        "(length (filter (<= (predict_int input1)) (map predict_int input2)))",
        "(map predict_int (map cond-flip input1))"}) {
    const Prog p = parse_program(text);
    for (int N : {1, 2, 3, 5}) {
      CAPTURE(text);
      CAPTURE(N);
      const auto counts = count_all(p, N);
      const auto unrolled = unroll_occurrences(p, N);
      REQUIRE(unrolled.size() == counts.size());
      for (const auto& [occ, c] : unrolled) CHECK(c == counts[occ]);
    }
  }
}

TEST_CASE("length bound") {
  std::vector<std::size_t> lens;
  for (int i = 0; i < 1000; ++i) lens.push_back(1 + i % 3);
  const auto data = lists_of_lengths(lens);
  const LengthBound b = length_bound(data, 0.025, 0.05);
  REQUIRE(b.N.has_value());
  CHECK(*b.N == 3);
  CHECK(b.n == 1000);

  // a rare long list within the mistake budget leaves the pivot at 3; the
  // margin moves the threshold half way to 9
  lens[0] = 9;
  const LengthBound c = length_bound(lists_of_lengths(lens), 0.025, 0.05);
  CHECK(c.threshold == doctest::Approx(6.0));
  CHECK(*c.N == 6);

  CHECK_FALSE(length_bound(lists_of_lengths({1, 2, 3}), 0.025, 0.05).N.has_value());
  CHECK_THROWS_AS(length_bound(std::vector<DslExample>{}, 0.025, 0.05), std::invalid_argument);
}

TEST_CASE("calibration order: flips, then predictions, then comparisons") {
  const Prog p = parse_program(
      "(fold + (filter (cond-<= (predict_int (cond-flip input1))) (map predict_float input2)) 0)");
  const auto ops = occurrence_ops(p);
  const auto order = calibration_order(p);
  REQUIRE(order.size() == 4);
  CHECK(ops[order[0]] == Op::CondFlip);
  CHECK(ops[order[3]] == Op::CondLe);
}

TEST_CASE("sketch_dsl splits delta over the unrolled program") {
  const TaskSpec task = make_task("cond_sum", TaskVariant::real);
  const auto data = generate_task_data(task, PredictorConfig{}, 2500, 3);
  const Prog p = parse_program(kCondSum);
  DslSketchConfig cfg;
  const auto eps = candidate_eps(p, 0.05, 3, GridSpec{})[0];
  const auto errs = candidate_errs(p, 6.0, 3, GridSpec{})[0];
  const DslSketch s = sketch_dsl(p, eps, errs, data, cfg);
  CHECK(s.unrolled == 9);
  CHECK(s.delta_share == doctest::Approx(0.05 / 9.0));
  REQUIRE(s.records.size() == 3);
  REQUIRE(s.fill.gates.size() == 3);
  for (const auto& r : s.records) {
    CHECK(r.count == 3);
    CHECK(r.n > 0);
    REQUIRE(r.k.has_value());
    CHECK(s.fill.gates[r.occ] == r.gate);
    CHECK(r.gate >= r.threshold);
  }
  CHECK_FALSE(s.any_starved());
}

TEST_CASE("max_list_length") {
  const auto data = lists_of_lengths({4});
  CHECK(max_list_length(data[0]) == 4);
  DslExample nested{{make_list({make_list({make_int(1), make_int(2), make_int(3)})})}};
  CHECK(max_list_length(nested) == 3);
}
