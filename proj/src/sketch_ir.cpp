#include "pacsketch/sketch_ir.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pacsketch::ir {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_numeric(const Const& c) { return !std::holds_alternative<Token>(c); }

bool is_integral(const Const& c) {
  return std::holds_alternative<std::int64_t>(c) || std::holds_alternative<bool>(c);
}

std::int64_t to_int(const Const& c) {
  if (const auto* b = std::get_if<bool>(&c)) return *b ? 1 : 0;
  return std::get<std::int64_t>(c);
}

using BinaryReal = double (*)(double, double);
using BinaryInt = std::int64_t (*)(std::int64_t, std::int64_t);

Const arith(const Const& a, const Const& b, BinaryInt int_op, BinaryReal real_op) {
  if (is_integral(a) && is_integral(b)) return int_op(to_int(a), to_int(b));
  return real_op(to_real(a), to_real(b));
}

bool const_equal(const Const& a, const Const& b) {
  if (is_numeric(a) && is_numeric(b)) return to_real(a) == to_real(b);
  if (!is_numeric(a) && !is_numeric(b)) return std::get<Token>(a) == std::get<Token>(b);
  return false;
}

ComponentRegistry make_default_registry() {
  ComponentRegistry r;
  r.add("add", 2, [](std::span<const Const> x) {
    return arith(x[0], x[1], [](std::int64_t a, std::int64_t b) { return a + b; },
                 [](double a, double b) { return a + b; });
  });
  r.add("sub", 2, [](std::span<const Const> x) {
    return arith(x[0], x[1], [](std::int64_t a, std::int64_t b) { return a - b; },
                 [](double a, double b) { return a - b; });
  });
  r.add("mul", 2, [](std::span<const Const> x) {
    return arith(x[0], x[1], [](std::int64_t a, std::int64_t b) { return a * b; },
                 [](double a, double b) { return a * b; });
  });
  r.add("min", 2, [](std::span<const Const> x) {
    return arith(x[0], x[1], [](std::int64_t a, std::int64_t b) { return std::min(a, b); },
                 [](double a, double b) { return std::min(a, b); });
  });
  r.add("max", 2, [](std::span<const Const> x) {
    return arith(x[0], x[1], [](std::int64_t a, std::int64_t b) { return std::max(a, b); },
                 [](double a, double b) { return std::max(a, b); });
  });
  r.add("neg", 1, [](std::span<const Const> x) -> Const {
    if (is_integral(x[0])) return -to_int(x[0]);
    return -to_real(x[0]);
  });
  r.add("abs", 1, [](std::span<const Const> x) -> Const {
    if (is_integral(x[0])) return static_cast<std::int64_t>(std::llabs(to_int(x[0])));
    return std::abs(to_real(x[0]));
  });
  r.add("one_minus", 1, [](std::span<const Const> x) -> Const { return 1.0 - to_real(x[0]); });
  r.add("le", 2, [](std::span<const Const> x) -> Const { return to_real(x[0]) <= to_real(x[1]); });
  r.add("lt", 2, [](std::span<const Const> x) -> Const { return to_real(x[0]) < to_real(x[1]); });
  r.add("ge", 2, [](std::span<const Const> x) -> Const { return to_real(x[0]) >= to_real(x[1]); });
  r.add("gt", 2, [](std::span<const Const> x) -> Const { return to_real(x[0]) > to_real(x[1]); });
  r.add("eq", 2, [](std::span<const Const> x) -> Const { return const_equal(x[0], x[1]); });
  r.add("ne", 2, [](std::span<const Const> x) -> Const { return !const_equal(x[0], x[1]); });
  r.add("and", 2, [](std::span<const Const> x) -> Const { return to_bool(x[0]) && to_bool(x[1]); });
  r.add("or", 2, [](std::span<const Const> x) -> Const { return to_bool(x[0]) || to_bool(x[1]); });
  r.add("not", 1, [](std::span<const Const> x) -> Const { return !to_bool(x[0]); });
  r.add("ite", 3, [](std::span<const Const> x) -> Const { return to_bool(x[0]) ? x[1] : x[2]; });
  return r;
}

enum class Semantics { train, test };

Const eval(const Expr& e, const Valuation& val, const ComponentRegistry& reg, Semantics sem) {
  return std::visit(
      Overloaded{
          [](const Constant& c) -> Const { return c.value; },
          [&](const InputVar& x) -> Const {
            auto it = val.inputs.find(x.name);
            if (it == val.inputs.end()) throw EvalError("unbound input variable '" + x.name + "'");
            return it->second;
          },
          [&](const GroundTruthVar& y) -> Const {
            if (sem == Semantics::test) {
              throw EvalError("ground truth '" + y.name + "' read under test semantics");
            }
            auto it = val.ground_truth.find(y.name);
            if (it == val.ground_truth.end()) {
              throw EvalError("unbound ground-truth variable '" + y.name + "'");
            }
            return it->second;
          },
          [&](const Apply& app) -> Const {
            const Component* comp = reg.find(app.component);
            if (comp == nullptr) throw EvalError("unknown component '" + app.component + "'");
            if (comp->arity != app.args.size()) {
              throw EvalError("arity mismatch for '" + app.component + "'");
            }
            std::vector<Const> args;
            args.reserve(app.args.size());
            for (const Expr& a : app.args) args.push_back(eval(a, val, reg, sem));
            return comp->fn(args);
          },
          [&](const Spec& s) -> Const {
            if (sem == Semantics::train) return to_bool(eval(s.spec, val, reg, sem));
            if (!s.threshold) throw EvalError("test semantics applied to a threshold hole");
            return to_real(eval(s.score, val, reg, sem)) <= *s.threshold;
          },
      },
      e.node().v);
}

std::vector<Expr> children(const Node& n) {
  if (const auto* app = std::get_if<Apply>(&n.v)) return app->args;
  if (const auto* s = std::get_if<Spec>(&n.v)) return {s->score, s->spec};
  return {};
}

void collect(const Expr& e, Path& path, SpecPartition& out) {
  const auto kids = children(e.node());
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    collect(kids[i], path, out);
    path.pop_back();
  }
  if (const auto* s = std::get_if<Spec>(&e.node().v)) {
    out.all.push_back(path);
    if (!s->threshold) {
      out.threshold_holed.push_back(path);
    } else if (!s->eps) {
      out.eps_holed.push_back(path);
    } else {
      out.concrete.push_back(path);
    }
  }
}

void validate_rec(const Expr& e, const ComponentRegistry& reg, bool in_q) {
  if (e.empty()) throw std::invalid_argument("empty expression");
  std::visit(Overloaded{
                 [](const Constant&) {},
                 [](const InputVar&) {},
                 [&](const GroundTruthVar& y) {
                   if (!in_q) {
                     throw std::invalid_argument("ground truth '" + y.name +
                                                 "' used outside a specification body");
                   }
                 },
                 [&](const Apply& app) {
                   const Component* comp = reg.find(app.component);
                   if (comp == nullptr) {
                     throw std::invalid_argument("unknown component '" + app.component + "'");
                   }
                   if (comp->arity != app.args.size()) {
                     throw std::invalid_argument("arity mismatch for '" + app.component + "'");
                   }
                   for (const Expr& a : app.args) validate_rec(a, reg, in_q);
                 },
                 [&](const Spec& s) {
                   if (in_q) throw std::invalid_argument("specification nested inside a specification body");
                   if (!s.threshold && !s.eps) {
                     throw std::invalid_argument("specification with both threshold and eps holes");
                   }
                   if (s.threshold && std::isnan(*s.threshold)) {
                     throw std::invalid_argument("NaN threshold");
                   }
                   if (s.eps && !(*s.eps > 0.0 && *s.eps <= 1.0)) {
                     throw std::invalid_argument("eps outside (0,1]");
                   }
                   validate_rec(s.score, reg, false);
                   validate_rec(s.spec, reg, true);
                 },
             },
             e.node().v);
}

}  // namespace

double to_real(const Const& c) {
  return std::visit(Overloaded{
                        [](bool b) { return b ? 1.0 : 0.0; },
                        [](std::int64_t i) { return static_cast<double>(i); },
                        [](double d) { return d; },
                        [](const Token& t) -> double {
                          throw EvalError("token '" + t.text + "' used as a number");
                        },
                    },
                    c);
}

bool to_bool(const Const& c) {
  return std::visit(Overloaded{
                        [](bool b) { return b; },
                        [](std::int64_t i) -> bool {
                          if (i != 0 && i != 1) throw EvalError("integer is not a truth value");
                          return i == 1;
                        },
                        [](double d) -> bool {
                          if (d != 0.0 && d != 1.0) throw EvalError("real is not a truth value");
                          return d == 1.0;
                        },
                        [](const Token& t) -> bool {
                          throw EvalError("token '" + t.text + "' used as a truth value");
                        },
                    },
                    c);
}

std::string to_string(const Const& c) {
  return std::visit(Overloaded{
                        [](bool b) -> std::string { return b ? "true" : "false"; },
                        [](std::int64_t i) { return std::to_string(i); },
                        [](double d) {
                          std::ostringstream os;
                          os.precision(17);
                          os << d;
                          return os.str();
                        },
                        [](const Token& t) { return "'" + t.text + "'"; },
                    },
                    c);
}

Expr constant(Const value) {
  if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
    throw std::invalid_argument("real constants must be finite");
  }
  return Expr(std::make_shared<const Node>(Node{Constant{std::move(value)}}));
}

Expr input(std::string name) {
  return Expr(std::make_shared<const Node>(Node{InputVar{std::move(name)}}));
}

Expr truth(std::string name) {
  return Expr(std::make_shared<const Node>(Node{GroundTruthVar{std::move(name)}}));
}

Expr apply(std::string component, std::vector<Expr> args) {
  return Expr(std::make_shared<const Node>(Node{Apply{std::move(component), std::move(args)}}));
}

Expr spec(Expr score, std::optional<double> threshold, Expr q, std::optional<double> eps,
          GuaranteeMode mode) {
  if (!threshold && !eps) {
    throw std::invalid_argument("a specification may leave the threshold or eps open, not both");
  }
  return Expr(std::make_shared<const Node>(
      Node{Spec{std::move(score), threshold, std::move(q), eps, mode}}));
}

const Node& node_at(const Expr& e, const Path& path) {
  const Node* cur = &e.node();
  for (std::size_t idx : path) {
    if (const auto* app = std::get_if<Apply>(&cur->v)) {
      if (idx >= app->args.size()) throw std::out_of_range("path index out of range");
      cur = &app->args[idx].node();
    } else if (const auto* s = std::get_if<Spec>(&cur->v)) {
      if (idx > 1) throw std::out_of_range("path index out of range");
      cur = idx == 0 ? &s->score.node() : &s->spec.node();
    } else {
      throw std::out_of_range("path descends into a leaf");
    }
  }
  return *cur;
}

const Spec& spec_at(const Expr& e, const Path& path) {
  const auto* s = std::get_if<Spec>(&node_at(e, path).v);
  if (s == nullptr) throw std::invalid_argument("no specification at " + path_to_string(path));
  return *s;
}

namespace {

Expr replace_rec(const Expr& e, const Path& path, std::size_t depth, Expr replacement) {
  if (depth == path.size()) return replacement;
  const std::size_t idx = path[depth];
  if (const auto* app = std::get_if<Apply>(&e.node().v)) {
    if (idx >= app->args.size()) throw std::out_of_range("path index out of range");
    Apply copy = *app;
    copy.args[idx] = replace_rec(app->args[idx], path, depth + 1, std::move(replacement));
    return Expr(std::make_shared<const Node>(Node{std::move(copy)}));
  }
  if (const auto* s = std::get_if<Spec>(&e.node().v)) {
    Spec copy = *s;
    if (idx == 0) {
      copy.score = replace_rec(s->score, path, depth + 1, std::move(replacement));
    } else if (idx == 1) {
      copy.spec = replace_rec(s->spec, path, depth + 1, std::move(replacement));
    } else {
      throw std::out_of_range("path index out of range");
    }
    return Expr(std::make_shared<const Node>(Node{std::move(copy)}));
  }
  throw std::out_of_range("path descends into a leaf");
}

}  // namespace

Expr replace_at(const Expr& e, const Path& path, Expr replacement) {
  return replace_rec(e, path, 0, std::move(replacement));
}

Expr fill_threshold(const Expr& e, const Path& path, double value) {
  Spec s = spec_at(e, path);
  if (s.threshold) throw std::invalid_argument("threshold at " + path_to_string(path) + " is not a hole");
  s.threshold = value;
  return replace_at(e, path, Expr(std::make_shared<const Node>(Node{std::move(s)})));
}

Expr fill_eps(const Expr& e, const Path& path, double value) {
  Spec s = spec_at(e, path);
  if (s.eps) throw std::invalid_argument("eps at " + path_to_string(path) + " is not a hole");
  s.eps = value;
  return replace_at(e, path, Expr(std::make_shared<const Node>(Node{std::move(s)})));
}

void ComponentRegistry::add(std::string id, std::size_t arity,
                            std::function<Const(std::span<const Const>)> fn) {
  components_[std::move(id)] = Component{arity, std::move(fn)};
}

const Component* ComponentRegistry::find(const std::string& id) const {
  auto it = components_.find(id);
  return it == components_.end() ? nullptr : &it->second;
}

std::vector<std::string> ComponentRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : components_) out.push_back(id);
  return out;
}

const ComponentRegistry& default_registry() {
  static const ComponentRegistry reg = make_default_registry();
  return reg;
}

Const eval_train(const Expr& e, const Valuation& a, const ComponentRegistry& reg) {
  return eval(e, a, reg, Semantics::train);
}

Const eval_test(const Expr& e, const Valuation& b, const ComponentRegistry& reg) {
  return eval(e, b, reg, Semantics::test);
}

SpecPartition collect_specs(const Expr& e) {
  SpecPartition out;
  Path path;
  collect(e, path, out);
  return out;
}

std::vector<Path> bottom_up_order(std::vector<Path> specs) {
  std::stable_sort(specs.begin(), specs.end(), [](const Path& a, const Path& b) {
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    // One is a prefix of the other: the longer path is the descendant.
    return a.size() > b.size();
  });
  return specs;
}

bool is_full_sketch(const Expr& e) { return collect_specs(e).concrete.empty(); }

bool is_complete(const Expr& e) {
  const SpecPartition p = collect_specs(e);
  return p.threshold_holed.empty() && p.eps_holed.empty();
}

void validate(const Expr& e, const ComponentRegistry& reg) { validate_rec(e, reg, false); }

std::string path_to_string(const Path& p) {
  std::string out = "/";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += "/";
    out += std::to_string(p[i]);
  }
  return out;
}

}  // namespace pacsketch::ir
