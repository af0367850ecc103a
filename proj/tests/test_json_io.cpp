#include <doctest.h>

#include <limits>
#include <sstream>

#include "pacsketch/json_io.hpp"
#include "pacsketch/tasks.hpp"

using namespace pacsketch;
using namespace pacsketch::io;

TEST_CASE("reals with infinities") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(real_to_json(inf) == Json("inf"));
  CHECK(real_from_json(Json("-inf")) == -inf);
  CHECK(real_from_json(Json(0.25)) == 0.25);
  CHECK_THROWS_AS(real_from_json(Json("abc")), FormatError);
}

TEST_CASE("constants") {
  CHECK(std::get<bool>(const_from_json(const_to_json(true))));
  CHECK(std::get<std::int64_t>(const_from_json(const_to_json(std::int64_t{7}))) == 7);
  CHECK(std::get<ir::Token>(const_from_json(const_to_json(ir::Token{"cat"}))).text == "cat");
  CHECK(std::get<double>(const_from_json(Json{{"real", "inf"}})) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("expressions round trip, holes included") {
  const ir::Expr e = ir::apply(
      "and", {ir::spec(ir::apply("one_minus", {ir::input("conf")}), std::nullopt, ir::truth("person"),
                       0.05, ir::GuaranteeMode::conditional),
              ir::spec(ir::input("conf"), 0.5, ir::apply("ne", {ir::input("p"), ir::truth("y")}),
                       std::nullopt, ir::GuaranteeMode::implication)});
  const Json j = expr_to_json(e);
  const ir::Expr back = expr_from_json(parse_json(j.dump()));
  CHECK(expr_to_json(back) == j);
  CHECK(j["apply"] == "and");
  CHECK(j["args"][0]["spec"]["threshold"] == "??");
  CHECK(j["args"][1]["spec"]["mode"] == "implies");
  CHECK(program_to_json(e)["schema"] == kSchema);
  CHECK(expr_to_json(program_from_json(program_to_json(e))) == j);
  CHECK(expr_to_json(program_from_json(j)) == j);
  CHECK_THROWS_AS(expr_from_json(Json{{"bogus", 1}}), FormatError);
  Json both = j["args"][0];
  both["spec"]["eps"] = "??";
  CHECK_THROWS_AS(expr_from_json(both), FormatError);
}

TEST_CASE("valuations") {
  ir::Valuation v;
  v.inputs["conf"] = 0.7;
  v.inputs["label"] = ir::Token{"dog"};
  v.ground_truth["y"] = std::int64_t{3};
  const ir::Valuation back = valuation_from_json(valuation_to_json(v));
  CHECK(std::get<double>(back.inputs.at("conf")) == 0.7);
  CHECK(std::get<ir::Token>(back.inputs.at("label")).text == "dog");
  CHECK(std::get<std::int64_t>(back.ground_truth.at("y")) == 3);
}

TEST_CASE("dataset examples round trip") {
  const TaskSpec t = make_task("cond_sum", TaskVariant::real);
  const auto data = generate_task_data(t, dsl::PredictorConfig{}, 20, 4);
  for (const auto& ex : data) {
    const Json j = example_to_json(ex);
    const dsl::DslExample back = example_from_json(parse_json(j.dump()));
    CHECK(example_to_json(back) == j);
  }
  CHECK(value_from_json(Json(nullptr)).is_bot());
  const dsl::Value digit = value_from_json(Json{{"digit", 4}});
  CHECK(*std::get<dsl::ImageRef>(digit.v).record->truth_int == 4);
}

TEST_CASE("tasks round trip and builtins expand") {
  const TaskSpec t = make_task("prefix_max", TaskVariant::real);
  const Json j = task_to_json(t);
  const TaskSpec back = task_from_json(parse_json(j.dump()));
  CHECK(task_to_json(back) == j);

  const TaskSpec b = task_from_json(Json{{"builtin", "sum"}, {"variant", "float"}, {"N", "auto"}, {"eps", 0.1}});
  CHECK_FALSE(b.N.has_value());
  CHECK(b.eps == 0.1);
  CHECK(b.examples.size() == make_task("sum", TaskVariant::real).examples.size());
  CHECK_THROWS_AS(task_from_json(Json{{"builtin", "sum"}, {"components", {"teleport"}}}), FormatError);
}

TEST_CASE("jsonl with a header") {
  std::stringstream ss;
  write_jsonl(ss, "valuations", {Json{{"a", 1}}, Json{{"a", 2}}});
  const auto rows = read_jsonl(ss);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["a"] == 2);
  CHECK(is_header(header("x")));
  CHECK_FALSE(is_header(rows[0]));
  std::stringstream bad("{\"a\": 1}\n{oops\n");
  CHECK_THROWS_AS(read_jsonl(bad), FormatError);
}

TEST_CASE("reports serialise") {
  McReport r;
  r.trials = 10;
  const Json j = mc_report_to_json(r);
  CHECK(j["trials"] == 10);
  CHECK(mistake_budget_to_json(std::nullopt).is_null());
  CHECK(mistake_budget_to_json(MistakeBudget{3}) == 3);
}
