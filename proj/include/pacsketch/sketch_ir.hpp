#ifndef PACSKETCH_SKETCH_IR_HPP
#define PACSKETCH_SKETCH_IR_HPP

// Core sketch language: constants, input and ground-truth variables, component
// application, and scored specification expressions
//
//     phi(score, c) { Q }_eps^mode      with phi(z, t) = 1(z <= t)
//
// where c or eps (never both) may be a hole. Train semantics evaluate Q;
// test semantics evaluate phi and never look at ground truth.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pacsketch::ir {

struct Token {
  std::string text;
  bool operator==(const Token&) const = default;
};

using Const = std::variant<bool, std::int64_t, double, Token>;

double to_real(const Const& c);
bool to_bool(const Const& c);
std::string to_string(const Const& c);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GuaranteeMode { conditional, implication };

struct Node;

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  bool empty() const { return node_ == nullptr; }
  const Node* get() const { return node_.get(); }

 private:
  std::shared_ptr<const Node> node_;
};

struct Constant {
  Const value;
};
struct InputVar {
  std::string name;
};
struct GroundTruthVar {
  std::string name;
};
struct Apply {
  std::string component;
  std::vector<Expr> args;
};
struct Spec {
  Expr score;
  std::optional<double> threshold;  // nullopt is a hole
  Expr spec;
  std::optional<double> eps;        // nullopt is a hole
  GuaranteeMode mode = GuaranteeMode::conditional;
};

struct Node {
  std::variant<Constant, InputVar, GroundTruthVar, Apply, Spec> v;
};

Expr constant(Const value);
Expr input(std::string name);
Expr truth(std::string name);
Expr apply(std::string component, std::vector<Expr> args);
/// Throws std::invalid_argument if both threshold and eps are holes.
Expr spec(Expr score, std::optional<double> threshold, Expr q, std::optional<double> eps,
          GuaranteeMode mode);

// Root-to-node child indices. Apply children are its args; Spec children are
// {score, spec}.
using Path = std::vector<std::size_t>;

const Node& node_at(const Expr& e, const Path& path);
const Spec& spec_at(const Expr& e, const Path& path);
Expr replace_at(const Expr& e, const Path& path, Expr replacement);
Expr fill_threshold(const Expr& e, const Path& path, double value);
Expr fill_eps(const Expr& e, const Path& path, double value);

struct Valuation {
  std::map<std::string, Const> inputs;
  std::map<std::string, Const> ground_truth;
};

struct Component {
  std::size_t arity = 0;
  std::function<Const(std::span<const Const>)> fn;
};

class ComponentRegistry {
 public:
  void add(std::string id, std::size_t arity, std::function<Const(std::span<const Const>)> fn);
  const Component* find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, Component> components_;
};

/// Arithmetic, comparison and boolean components: add sub mul neg abs
/// one_minus min max le lt ge gt eq ne and or not ite.
const ComponentRegistry& default_registry();

Const eval_train(const Expr& e, const Valuation& a, const ComponentRegistry& reg);
Const eval_test(const Expr& e, const Valuation& b, const ComponentRegistry& reg);

struct SpecPartition {
  std::vector<Path> all;             // post-order
  std::vector<Path> threshold_holed;
  std::vector<Path> eps_holed;
  std::vector<Path> concrete;
};

SpecPartition collect_specs(const Expr& e);

/// Descendants first, then left to right.
std::vector<Path> bottom_up_order(std::vector<Path> specs);

bool is_full_sketch(const Expr& e);
bool is_complete(const Expr& e);

/// Structural checks: known components with matching arity, ground truth only
/// inside Q parts, no spec expressions inside Q parts.
void validate(const Expr& e, const ComponentRegistry& reg);

std::string path_to_string(const Path& p);

}  // namespace pacsketch::ir

#endif  // PACSKETCH_SKETCH_IR_HPP
