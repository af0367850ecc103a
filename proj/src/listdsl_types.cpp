#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "pacsketch/listdsl.hpp"

namespace pacsketch::dsl {

// ---- types ----

namespace {

TypePtr simple(TypeKind k) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  return t;
}

}  // namespace

TypePtr bool_type() {
  static const TypePtr t = simple(TypeKind::Bool);
  return t;
}
TypePtr int_type() {
  static const TypePtr t = simple(TypeKind::Int);
  return t;
}
TypePtr float_type() {
  static const TypePtr t = simple(TypeKind::Float);
  return t;
}
TypePtr image_type() {
  static const TypePtr t = simple(TypeKind::Image);
  return t;
}

TypePtr list_type(TypePtr elem) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::List;
  t->arg = std::move(elem);
  return t;
}

TypePtr arrow_type(TypePtr param, TypePtr result) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Arrow;
  t->arg = std::move(param);
  t->result = std::move(result);
  return t;
}

bool same_type(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::List:
      return same_type(a->arg, b->arg);
    case TypeKind::Arrow:
      return same_type(a->arg, b->arg) && same_type(a->result, b->result);
    default:
      return true;
  }
}

bool accepts(const TypePtr& expected, const TypePtr& actual) {
  if (expected->kind == TypeKind::Float && actual->kind == TypeKind::Int) return true;
  return same_type(expected, actual);
}

std::string type_to_string(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Bool:
      return "bool";
    case TypeKind::Int:
      return "int";
    case TypeKind::Float:
      return "float";
    case TypeKind::Image:
      return "image";
    case TypeKind::List:
      return "list(" + type_to_string(t->arg) + ")";
    case TypeKind::Arrow: {
      std::string lhs = type_to_string(t->arg);
      if (t->arg->kind == TypeKind::Arrow) lhs = "(" + lhs + ")";
      return lhs + " -> " + type_to_string(t->result);
    }
  }
  return "?";
}

namespace {

struct TypeParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw TypeError("bad type '" + std::string(s) + "': " + what);
  }
  TypePtr atom() {
    if (eat("(")) {
      TypePtr t = arrow();
      if (!eat(")")) fail("expected ')'");
      return t;
    }
    if (eat("bool")) return bool_type();
    if (eat("int")) return int_type();
    if (eat("float")) return float_type();
    if (eat("image")) return image_type();
    if (eat("list")) {
      if (!eat("(")) fail("expected '(' after list");
      TypePtr e = arrow();
      if (!eat(")")) fail("expected ')'");
      return list_type(e);
    }
    fail("unknown type name");
  }
  TypePtr arrow() {
    TypePtr lhs = atom();
    if (eat("->") || eat("→")) return arrow_type(lhs, arrow());
    return lhs;
  }
};

}  // namespace

TypePtr parse_type(std::string_view text) {
  TypeParser p{text};
  TypePtr t = p.arrow();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return t;
}

// ---- values ----

Value bot() { return Value{Bot{}}; }
Value make_int(std::int64_t i) { return Value{i}; }
Value make_float(double d) { return Value{d}; }
Value make_bool(bool b) { return Value{b}; }
Value make_image(std::shared_ptr<const ImageRecord> rec) {
  const bool flipped = rec->truth_flipped;
  return Value{ImageRef{std::move(rec), flipped}};
}
Value make_list(std::vector<Value> items) { return Value{ListV{std::move(items)}}; }

namespace {

std::string number_text(double d) {
  if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(d));
  }
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

}  // namespace

std::string value_signature(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bot>) {
          return "_|_";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "#t" : "#f";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return number_text(static_cast<double>(x));
        } else if constexpr (std::is_same_v<T, double>) {
          return number_text(x);
        } else if constexpr (std::is_same_v<T, ImageRef>) {
          return "img:" + x.record->id + (x.flipped ? "~" : "");
        } else if constexpr (std::is_same_v<T, ListV>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (i > 0) out += ",";
            out += value_signature(x.items[i]);
          }
          return out + "]";
        } else {
          std::string out = op_name(x.op) + "(";
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i > 0) out += ",";
            out += value_signature(x.args[i]);
          }
          return out + ")";
        }
      },
      v.v);
}

namespace {

std::optional<double> as_number(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v.v)) return *d;
  return std::nullopt;
}

}  // namespace

bool values_equal(const Value& a, const Value& b, double tol) {
  const auto na = as_number(a);
  const auto nb = as_number(b);
  if (na && nb) return std::abs(*na - *nb) <= tol;
  if (na || nb) return false;
  if (a.v.index() != b.v.index()) return false;
  if (const auto* la = std::get_if<ListV>(&a.v)) {
    const auto& lb = std::get<ListV>(b.v);
    if (la->items.size() != lb.items.size()) return false;
    for (std::size_t i = 0; i < la->items.size(); ++i) {
      if (!values_equal(la->items[i], lb.items[i], tol)) return false;
    }
    return true;
  }
  return value_signature(a) == value_signature(b);
}

double output_error(const Value& a, const Value& b) {
  if (a.is_bot() || b.is_bot()) throw DslError("output_error: bottom has no error");
  const auto na = as_number(a);
  const auto nb = as_number(b);
  if (na && nb) return std::abs(*na - *nb);
  if (const auto* ba = std::get_if<bool>(&a.v)) {
    if (const auto* bb = std::get_if<bool>(&b.v)) return *ba == *bb ? 0.0 : 1.0;
  }
  const auto* la = std::get_if<ListV>(&a.v);
  const auto* lb = std::get_if<ListV>(&b.v);
  if (la && lb) {
    if (la->items.size() != lb->items.size()) {
      throw DslError("output_error: lists of unequal length");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < la->items.size(); ++i) {
      worst = std::max(worst, output_error(la->items[i], lb->items[i]));
    }
    return worst;
  }
  throw DslError("output_error: values of different shapes");
}

// ---- syntax trees ----

namespace {

Prog node(Node n) { return std::make_shared<const Node>(std::move(n)); }

}  // namespace

Prog make_input(int index) {
  Node n;
  n.kind = NodeKind::Input;
  n.index = index;
  return node(std::move(n));
}

Prog make_const(std::int64_t value) {
  Node n;
  n.kind = NodeKind::IntConst;
  n.value = value;
  return node(std::move(n));
}

Prog make_comp(Op op, int occ) {
  Node n;
  n.kind = NodeKind::Comp;
  n.op = op;
  n.occ = is_annotated(op) ? occ : -1;
  return node(std::move(n));
}

Prog make_app(Prog f, Prog x) {
  Node n;
  n.kind = NodeKind::App;
  n.kids = {std::move(f), std::move(x)};
  return node(std::move(n));
}

Prog make_fold(Prog f, Prog list, Prog base) {
  Node n;
  n.kind = NodeKind::Fold;
  n.kids = {std::move(f), std::move(list), std::move(base)};
  return node(std::move(n));
}

Prog make_map(Prog f, Prog list) {
  Node n;
  n.kind = NodeKind::Map;
  n.kids = {std::move(f), std::move(list)};
  return node(std::move(n));
}

Prog make_filter(Prog f, Prog list) {
  Node n;
  n.kind = NodeKind::Filter;
  n.kids = {std::move(f), std::move(list)};
  return node(std::move(n));
}

Prog make_slice(Prog list, Prog from, Prog to) {
  Node n;
  n.kind = NodeKind::Slice;
  n.kids = {std::move(list), std::move(from), std::move(to)};
  return node(std::move(n));
}

Prog make_length(Prog list) {
  Node n;
  n.kind = NodeKind::Length;
  n.kids = {std::move(list)};
  return node(std::move(n));
}

bool is_annotated(Op op) {
  switch (op) {
    case Op::CondLe:
    case Op::CondGe:
    case Op::PredictInt:
    case Op::PredictFloat:
    case Op::CondFlip:
      return true;
    default:
      return false;
  }
}

std::size_t arity(Op op) {
  switch (op) {
    case Op::PredictInt:
    case Op::PredictFloat:
    case Op::CondFlip:
      return 1;
    default:
      return 2;
  }
}

std::string op_name(Op op) {
  switch (op) {
    case Op::Add:
      return "+";
    case Op::Sub:
      return "-";
    case Op::Max:
      return "max";
    case Op::Le:
      return "≤";
    case Op::Eq:
      return "=";
    case Op::Ge:
      return "≥";
    case Op::CondLe:
      return "cond-≤";
    case Op::CondGe:
      return "cond-≥";
    case Op::PredictInt:
      return "predict_int";
    case Op::PredictFloat:
      return "predict_float";
    case Op::CondFlip:
      return "cond-flip";
  }
  return "?";
}

std::optional<Op> op_from_name(std::string_view name) {
  static const std::pair<std::string_view, Op> table[] = {
      {"+", Op::Add},
      {"-", Op::Sub},
      {"−", Op::Sub},
      {"max", Op::Max},
      {"<=", Op::Le},
      {"≤", Op::Le},
      {"=", Op::Eq},
      {">=", Op::Ge},
      {"≥", Op::Ge},
      {"cond-<=", Op::CondLe},
      {"cond-≤", Op::CondLe},
      {"cond->=", Op::CondGe},
      {"cond-≥", Op::CondGe},
      {"predict_int", Op::PredictInt},
      {"predict_float", Op::PredictFloat},
      {"cond-flip", Op::CondFlip},
  };
  for (const auto& [text, op] : table) {
    if (text == name) return op;
  }
  return std::nullopt;
}

namespace {

Prog renumber(const Prog& p, int& next) {
  if (p->kind == NodeKind::Comp) {
    if (!is_annotated(p->op)) return p;
    return make_comp(p->op, next++);
  }
  if (p->kids.empty()) return p;
  Node n = *p;
  for (auto& k : n.kids) k = renumber(k, next);
  return node(std::move(n));
}

void collect_ops(const Prog& p, std::vector<Op>& out) {
  if (p->kind == NodeKind::Comp && p->occ >= 0) {
    if (out.size() <= static_cast<std::size_t>(p->occ)) out.resize(p->occ + 1);
    out[p->occ] = p->op;
  }
  for (const auto& k : p->kids) collect_ops(k, out);
}

}  // namespace

Prog number_occurrences(const Prog& p) {
  int next = 0;
  return renumber(p, next);
}

std::vector<Op> occurrence_ops(const Prog& p) {
  std::vector<Op> out;
  collect_ops(p, out);
  return out;
}

std::size_t occurrence_count(const Prog& p) { return occurrence_ops(p).size(); }

std::string occurrence_name(int occ) { return "f" + std::to_string(occ + 1); }

int depth(const Prog& p) {
  int d = 0;
  for (const auto& k : p->kids) d = std::max(d, depth(k));
  return d + 1;
}

std::size_t node_count(const Prog& p) {
  std::size_t n = 1;
  for (const auto& k : p->kids) n += node_count(k);
  return n;
}

// ---- typing ----

namespace {

bool numeric(const TypePtr& t) { return t->kind == TypeKind::Int || t->kind == TypeKind::Float; }

TypePtr join_numeric(const TypePtr& a, const TypePtr& b) {
  return a->kind == TypeKind::Float || b->kind == TypeKind::Float ? float_type() : int_type();
}

// Parameter types of monomorphic components; null for the numeric polymorphic ones.
TypePtr param_type(Op op, std::size_t i) {
  switch (op) {
    case Op::Le:
    case Op::Eq:
    case Op::Ge:
      return int_type();
    case Op::CondLe:
    case Op::CondGe:
      return float_type();
    case Op::PredictInt:
    case Op::PredictFloat:
    case Op::CondFlip:
      return image_type();
    default:
      (void)i;
      return nullptr;
  }
}

bool prefix_ok(Op op, const std::vector<TypePtr>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const TypePtr p = param_type(op, i);
    if (p ? !accepts(p, args[i]) : !numeric(args[i])) return false;
  }
  return true;
}

TypePtr result_type(Op op, const std::vector<TypePtr>& args) {
  if (args.size() != arity(op) || !prefix_ok(op, args)) return nullptr;
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Max:
      return join_numeric(args[0], args[1]);
    case Op::Le:
    case Op::Eq:
    case Op::Ge:
    case Op::CondLe:
    case Op::CondGe:
      return bool_type();
    case Op::PredictInt:
      return int_type();
    case Op::PredictFloat:
      return float_type();
    case Op::CondFlip:
      return image_type();
  }
  return nullptr;
}

struct Typed {
  TypePtr value;  // set for first-order terms
  Op op = Op::Add;
  std::vector<TypePtr> pre;  // partial application arguments
};

Typed infer(const Prog& p, const std::vector<TypePtr>& inputs);

TypePtr value_of(const Prog& p, const std::vector<TypePtr>& inputs, const char* where) {
  Typed t = infer(p, inputs);
  if (!t.value) throw TypeError(std::string(where) + ": expected a value, got a function");
  return t.value;
}

Typed function_of(const Prog& p, const std::vector<TypePtr>& inputs, std::size_t extra,
                  const char* where) {
  Typed t = infer(p, inputs);
  if (t.value) throw TypeError(std::string(where) + ": expected a function");
  if (t.pre.size() + extra != arity(t.op)) {
    throw TypeError(std::string(where) + ": '" + op_name(t.op) + "' needs " +
                    std::to_string(arity(t.op) - t.pre.size()) + " more argument(s), gets " +
                    std::to_string(extra));
  }
  return t;
}

TypePtr list_elem(const TypePtr& t, const char* where) {
  if (t->kind != TypeKind::List) throw TypeError(std::string(where) + ": expected a list");
  return t->arg;
}

Typed infer(const Prog& p, const std::vector<TypePtr>& inputs) {
  Typed out;
  switch (p->kind) {
    case NodeKind::Input:
      if (p->index < 1 || static_cast<std::size_t>(p->index) > inputs.size()) {
        throw TypeError("input" + std::to_string(p->index) + " is not declared");
      }
      out.value = inputs[p->index - 1];
      return out;
    case NodeKind::IntConst:
      out.value = int_type();
      return out;
    case NodeKind::Comp:
      out.op = p->op;
      return out;
    case NodeKind::App: {
      Typed f = infer(p->kids[0], inputs);
      if (f.value) throw TypeError("application of a non-function");
      const TypePtr x = value_of(p->kids[1], inputs, "argument");
      f.pre.push_back(x);
      if (!prefix_ok(f.op, f.pre)) {
        throw TypeError("'" + op_name(f.op) + "' cannot take an argument of type " +
                        type_to_string(x));
      }
      if (f.pre.size() == arity(f.op)) {
        out.value = result_type(f.op, f.pre);
        return out;
      }
      return f;
    }
    case NodeKind::Fold: {
      const Typed f = function_of(p->kids[0], inputs, 2, "fold");
      const TypePtr elem = list_elem(value_of(p->kids[1], inputs, "fold"), "fold");
      const TypePtr base = value_of(p->kids[2], inputs, "fold");
      out.value = f.pre.empty() ? fold_result(f.op, elem, base) : nullptr;
      if (!out.value) {
        throw TypeError("fold: '" + op_name(f.op) + "' does not fit the list and accumulator");
      }
      return out;
    }
    case NodeKind::Map: {
      const Typed f = function_of(p->kids[0], inputs, 1, "map");
      const TypePtr elem = list_elem(value_of(p->kids[1], inputs, "map"), "map");
      auto args = f.pre;
      args.push_back(elem);
      const TypePtr r = result_type(f.op, args);
      if (!r) throw TypeError("map: '" + op_name(f.op) + "' cannot take " + type_to_string(elem));
      out.value = list_type(r);
      return out;
    }
    case NodeKind::Filter: {
      const Typed f = function_of(p->kids[0], inputs, 1, "filter");
      const TypePtr lt = value_of(p->kids[1], inputs, "filter");
      const TypePtr elem = list_elem(lt, "filter");
      auto args = f.pre;
      args.push_back(elem);
      const TypePtr r = result_type(f.op, args);
      if (!r || r->kind != TypeKind::Bool) throw TypeError("filter: predicate must return bool");
      out.value = lt;
      return out;
    }
    case NodeKind::Slice: {
      const TypePtr lt = value_of(p->kids[0], inputs, "slice");
      list_elem(lt, "slice");
      for (int i = 1; i <= 2; ++i) {
        if (value_of(p->kids[i], inputs, "slice")->kind != TypeKind::Int) {
          throw TypeError("slice: indices must be int");
        }
      }
      out.value = lt;
      return out;
    }
    case NodeKind::Length:
      list_elem(value_of(p->kids[0], inputs, "length"), "length");
      out.value = int_type();
      return out;
  }
  throw TypeError("unknown node");
}

}  // namespace

TypePtr typecheck(const Prog& p, const std::vector<TypePtr>& inputs) {
  return value_of(p, inputs, "program");
}

bool component_accepts(Op op, const std::vector<TypePtr>& args) {
  return args.size() <= arity(op) && prefix_ok(op, args);
}

TypePtr component_result(Op op, const std::vector<TypePtr>& args) { return result_type(op, args); }

TypePtr fold_result(Op op, const TypePtr& elem, const TypePtr& base) {
  if (arity(op) != 2) return nullptr;
  TypePtr acc = base;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const TypePtr r = result_type(op, {elem, acc});
    if (!r) return nullptr;
    if (accepts(acc, r)) return acc;
    if (acc->kind != TypeKind::Int || r->kind != TypeKind::Float) return nullptr;
    acc = float_type();
  }
  return nullptr;
}

}  // namespace pacsketch::dsl
