#ifndef PACSKETCH_LISTDSL_HPP
#define PACSKETCH_LISTDSL_HPP

// A small typed list-processing language whose learned components abstain
// (return bottom) when their confidence score falls below a gate.
//
//   P ::= input_i | int constant | component | (P P)
//       | (fold F L B) | (map F L) | (filter F L) | (slice L i j) | (length L)
//
// Components: + - max (numeric, sigma->sigma->sigma), <= = >= (int->int->bool),
// cond-<= cond->= (float->float->bool), predict_int, predict_float (image->int,
// image->float), cond-flip (image->image). The last five are annotated: each
// syntactic occurrence owns a gate threshold and an eps share, and
// predict_float also owns an error budget.
//
// Train semantics use ground truth; test semantics use predictions and gates.
// Bottom is absorbing everywhere, including inside lists.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pacsketch::dsl {

// ---- types ----

enum class TypeKind { Bool, Int, Float, Image, List, Arrow };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind = TypeKind::Int;
  TypePtr arg;     // list element, or arrow parameter
  TypePtr result;  // arrow result
};

TypePtr bool_type();
TypePtr int_type();
TypePtr float_type();
TypePtr image_type();
TypePtr list_type(TypePtr elem);
TypePtr arrow_type(TypePtr param, TypePtr result);

bool same_type(const TypePtr& a, const TypePtr& b);
/// An int may be supplied where a float is expected; nothing else converts.
bool accepts(const TypePtr& expected, const TypePtr& actual);
std::string type_to_string(const TypePtr& t);
/// Accepts "int", "float", "bool", "image", "list(T)" and "T -> T".
TypePtr parse_type(std::string_view text);

// ---- image records ----

struct Prediction {
  double value = 0.0;
  double confidence = 0.0;
};

struct FlipPrediction {
  bool flipped = false;
  double confidence = 1.0;
};

struct ImageRecord {
  std::string id;
  std::optional<std::int64_t> truth_int;
  std::optional<double> truth_float;
  bool truth_flipped = false;
  Prediction pred;
  std::optional<Prediction> pred_flipped;  // predictor output on a misoriented image
  std::optional<Prediction> pred_fast;
  FlipPrediction flip_pred;
};

// ---- values ----

enum class Op { Add, Sub, Max, Le, Eq, Ge, CondLe, CondGe, PredictInt, PredictFloat, CondFlip };

struct Value;

struct Bot {};

struct ImageRef {
  std::shared_ptr<const ImageRecord> record;
  bool flipped = false;  // current orientation is wrong
};

struct ListV {
  std::vector<Value> items;
};

struct Closure {
  Op op = Op::Add;
  int occ = -1;
  std::vector<Value> args;
};

struct Value {
  std::variant<Bot, bool, std::int64_t, double, ImageRef, ListV, Closure> v;

  bool is_bot() const { return std::holds_alternative<Bot>(v); }
};

Value bot();
Value make_int(std::int64_t i);
Value make_float(double d);
Value make_bool(bool b);
Value make_image(std::shared_ptr<const ImageRecord> rec);
Value make_list(std::vector<Value> items);

/// Deterministic rendering used for observational equivalence; integers and
/// integral floats print identically.
std::string value_signature(const Value& v);
bool values_equal(const Value& a, const Value& b, double tol = 1e-9);

class DslError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// L-infinity distance between two non-bottom values of the same shape.
/// Throws DslError on bottom, shape or length mismatch.
double output_error(const Value& a, const Value& b);

// ---- syntax trees ----

enum class NodeKind { Input, IntConst, Comp, App, Fold, Map, Filter, Slice, Length };

struct Node;
using Prog = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Input;
  int index = 0;            // Input: 1-based
  std::int64_t value = 0;   // IntConst
  Op op = Op::Add;          // Comp
  int occ = -1;             // Comp: occurrence id of annotated components
  std::vector<Prog> kids;   // App {f, x}; Fold {F, L, B}; Map/Filter {F, L}; Slice {L, i, j}; Length {L}
};

Prog make_input(int index);
Prog make_const(std::int64_t value);
Prog make_comp(Op op, int occ = -1);
Prog make_app(Prog f, Prog x);
Prog make_fold(Prog f, Prog list, Prog base);
Prog make_map(Prog f, Prog list);
Prog make_filter(Prog f, Prog list);
Prog make_slice(Prog list, Prog from, Prog to);
Prog make_length(Prog list);

bool is_annotated(Op op);
std::size_t arity(Op op);
std::string op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);

/// Renumbers annotated components 0, 1, ... in pre-order (printed f1, f2, ...).
Prog number_occurrences(const Prog& p);
std::size_t occurrence_count(const Prog& p);
/// ops[i] is the component of occurrence i.
std::vector<Op> occurrence_ops(const Prog& p);
std::string occurrence_name(int occ);
int depth(const Prog& p);
std::size_t node_count(const Prog& p);

// ---- typing ----

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Type of a first-order program. Throws TypeError.
TypePtr typecheck(const Prog& p, const std::vector<TypePtr>& inputs);

/// Whether the leading arguments fit the component's parameters.
bool component_accepts(Op op, const std::vector<TypePtr>& args);
/// Result type of a full application, or null when ill-typed.
TypePtr component_result(Op op, const std::vector<TypePtr>& args);
/// Accumulator type of (fold op L B) given element and base types, or null.
TypePtr fold_result(Op op, const TypePtr& elem, const TypePtr& base);

// ---- evaluation ----

enum class Mode { train, test };

/// Per-occurrence gates: an annotated component returns iff score >= gate.
struct Fill {
  std::vector<double> gates;
};

Fill permissive_fill(std::size_t occurrences);
Fill restrictive_fill(std::size_t occurrences);

/// One annotated component application. In test mode `value` is the proposed
/// (ungated) output; in train mode it is the true output.
///   predict_*: value = prediction, score = confidence
///   cond-*:    a1, a2 = operands, value = comparison, score = |a1 - a2|
///   cond-flip: value = 1 if the image is (predicted to be) misoriented,
///              score = flip confidence
struct AppEvent {
  int occ = -1;
  Op op = Op::PredictInt;
  double score = 0.0;
  double value = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  bool returned = true;
};

struct EvalOptions {
  Mode mode = Mode::train;
  const Fill* fill = nullptr;  // required in test mode
  bool fast = false;           // use the fast predictor's outputs
  std::vector<AppEvent>* trace = nullptr;
};

Value eval(const Prog& p, std::span<const Value> inputs, const EvalOptions& opts);

// ---- concrete syntax ----

/// Parses "(fold + (filter (cond-<= (predict_int input1)) (map predict_float input2)) 0)".
/// Unicode comparison signs and superscript input indices are also accepted.
/// Occurrences are numbered in pre-order.
Prog parse_program(std::string_view text);
std::string print_program(const Prog& p);

}  // namespace pacsketch::dsl

#endif  // PACSKETCH_LISTDSL_HPP
