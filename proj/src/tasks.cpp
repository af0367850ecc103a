#include "pacsketch/tasks.hpp"

#include <random>
#include <stdexcept>

namespace pacsketch {

using namespace dsl;

namespace {

Value img(int d) { return make_image(truth_image(d)); }

Value digits(std::vector<int> ds) {
  std::vector<Value> items;
  for (int d : ds) items.push_back(img(d));
  return make_list(std::move(items));
}

// One list input.
struct ListCase {
  std::vector<int> list;
  int out;
};

// A digit and a list.
struct PairCase {
  int k;
  std::vector<int> list;
  int out;
};

const std::vector<ListCase> kSum = {{{1, 2, 3}, 6}, {{4, 0}, 4}, {{7}, 7}, {{2, 9, 5}, 16}};
const std::vector<ListCase> kMax = {{{1, 5, 3}, 5}, {{4, 0}, 4}, {{2, 9, 5}, 9}, {{6}, 6}};
const std::vector<PairCase> kCondSum = {
    {3, {1, 5, 3}, 8}, {2, {4, 1}, 4}, {5, {2, 7, 9}, 16}, {6, {6}, 6}, {9, {1, 2}, 0}};
const std::vector<PairCase> kPrefixMax = {
    {2, {3, 7, 5}, 7}, {1, {8, 2}, 8}, {0, {4}, 0}, {3, {1, 6, 2}, 6}, {1, {2, 9, 4}, 2}};
const std::vector<PairCase> kCondCount = {
    {3, {1, 5, 3}, 2}, {2, {4, 1}, 1}, {5, {2, 7, 9}, 2}, {6, {6}, 1}, {9, {1, 2}, 0}};

Value number(int v, bool real) { return real ? make_float(v) : make_int(v); }

std::vector<IoExample> list_examples(const std::vector<ListCase>& cases, bool real) {
  std::vector<IoExample> out;
  for (const auto& c : cases) out.push_back(IoExample{{digits(c.list)}, number(c.out, real)});
  return out;
}

std::vector<IoExample> pair_examples(const std::vector<PairCase>& cases, bool real) {
  std::vector<IoExample> out;
  for (const auto& c : cases) {
    out.push_back(IoExample{{img(c.k), digits(c.list)}, number(c.out, real)});
  }
  return out;
}

std::vector<Op> components(TaskVariant v) {
  std::vector<Op> ops{Op::Add, Op::Sub, Op::Max};
  if (v == TaskVariant::real) {
    ops.insert(ops.end(), {Op::CondLe, Op::CondGe});
  }
  ops.insert(ops.end(), {Op::Le, Op::Eq, Op::Ge, Op::PredictInt});
  if (v == TaskVariant::real) ops.push_back(Op::PredictFloat);
  if (v == TaskVariant::flip) ops.push_back(Op::CondFlip);
  return ops;
}

// Train semantics already read upright truth, so examples cannot demand
// cond-flip; flip tasks fix the program instead.
std::string flip_program(std::string_view name) {
  const std::string k = "(predict_int (cond-flip input1))";
  const std::string xs = "(map predict_int (map cond-flip input2))";
  if (name == "sum") return "(fold + (map predict_int (map cond-flip input1)) 0)";
  if (name == "max") return "(fold max (map predict_int (map cond-flip input1)) 0)";
  if (name == "cond_sum") return "(fold + (filter (<= " + k + ") " + xs + ") 0)";
  if (name == "prefix_max") return "(fold max (slice " + xs + " 0 " + k + ") 0)";
  return "(length (filter (<= " + k + ") " + xs + "))";
}

}  // namespace

std::string variant_name(TaskVariant v) {
  switch (v) {
    case TaskVariant::integer:
      return "integer";
    case TaskVariant::real:
      return "real";
    case TaskVariant::flip:
      return "flip";
    case TaskVariant::fast:
      return "fast";
  }
  return "integer";
}

TaskVariant parse_variant(std::string_view name) {
  if (name == "integer" || name == "int") return TaskVariant::integer;
  if (name == "real" || name == "float") return TaskVariant::real;
  if (name == "flip") return TaskVariant::flip;
  if (name == "fast") return TaskVariant::fast;
  throw std::invalid_argument("unknown task variant '" + std::string(name) + "'");
}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"sum", "max", "cond_sum", "prefix_max",
                                              "cond_count"};
  return names;
}

TaskSpec make_task(std::string_view name, TaskVariant variant) {
  const bool real = variant == TaskVariant::real;
  TaskSpec t;
  t.name = std::string(name);
  t.components = components(variant);
  t.fast = variant == TaskVariant::fast;
  const TypePtr images = list_type(image_type());
  if (name == "sum" || name == "max") {
    t.examples = list_examples(name == "sum" ? kSum : kMax, real);
    t.input_types = {images};
    t.output_type = real ? float_type() : int_type();
  } else if (name == "cond_sum" || name == "prefix_max") {
    t.examples = pair_examples(name == "cond_sum" ? kCondSum : kPrefixMax, real);
    t.input_types = {image_type(), images};
    t.output_type = real ? float_type() : int_type();
  } else if (name == "cond_count") {
    t.examples = pair_examples(kCondCount, false);
    t.input_types = {image_type(), images};
    t.output_type = int_type();
  } else {
    throw std::invalid_argument("unknown task '" + std::string(name) + "'");
  }
  if (variant == TaskVariant::flip) t.program = flip_program(name);
  return t;
}

std::vector<DslExample> generate_task_data(const TaskSpec& task, const PredictorConfig& cfg,
                                           std::size_t n, std::uint64_t seed,
                                           std::size_t max_len) {
  cfg.validate();
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> digit(0, 9);
  std::uniform_int_distribution<std::size_t> length(1, max_len);
  std::size_t next_id = 0;
  auto draw = [&] {
    const std::int64_t d = digit(rng);
    auto rec = std::make_shared<ImageRecord>(
        draw_image(cfg, rng, d, "i" + std::to_string(next_id++)));
    return make_image(std::move(rec));
  };
  std::vector<DslExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DslExample ex;
    for (const auto& t : task.input_types) {
      if (t->kind == TypeKind::Image) {
        ex.inputs.push_back(draw());
      } else if (t->kind == TypeKind::List && t->arg->kind == TypeKind::Image) {
        std::vector<Value> items;
        const std::size_t len = length(rng);
        for (std::size_t j = 0; j < len; ++j) items.push_back(draw());
        ex.inputs.push_back(make_list(std::move(items)));
      } else {
        throw std::invalid_argument("generate_task_data: only image and list(image) inputs");
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace pacsketch
