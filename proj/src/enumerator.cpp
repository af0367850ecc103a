#include "pacsketch/enumerator.hpp"

#include <map>
#include <set>
#include <string>

namespace pacsketch::dsl {

namespace {

// Bucket order: bool, int, float, image, then lists by element. Placing int
// before float makes integer arguments come first where a float is accepted.
std::string type_key(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Bool:
      return "0";
    case TypeKind::Int:
      return "1";
    case TypeKind::Float:
      return "2";
    case TypeKind::Image:
      return "3";
    case TypeKind::List:
      return "4" + type_key(t->arg);
    case TypeKind::Arrow:
      return "5" + type_key(t->arg) + type_key(t->result);
  }
  return "9";
}

struct Term {
  Prog prog;
  TypePtr type;
  int depth = 0;
};

struct Bucket {
  TypePtr type;
  std::vector<std::size_t> terms;  // nondecreasing depth
};

class Enumerator {
 public:
  Enumerator(const EnumerationProblem& problem, EnumerationStats* stats)
      : pb_(problem), stats_(stats) {
    for (Op op : pb_.components) comps_.push_back(make_comp(op));
  }

  std::optional<Prog> run() {
    if (pb_.examples.empty()) return std::nullopt;
    std::vector<std::pair<Prog, TypePtr>> leaves;
    for (std::size_t i = 0; i < pb_.input_types.size(); ++i) {
      leaves.emplace_back(make_input(static_cast<int>(i + 1)), pb_.input_types[i]);
    }
    leaves.emplace_back(make_const(0), int_type());
    note_depth(1);
    for (const auto& [p, t] : leaves) {
      if (is_solution(p, t)) return number_occurrences(p);
    }
    for (const auto& [p, t] : leaves) add_term(p, t, 1);

    for (int d = 2; d <= pb_.depth_limit; ++d) {
      note_depth(d);
      // Every solution at this depth is seen; the fewest nodes wins, then the
      // earliest in enumeration order.
      std::optional<Prog> found;
      std::size_t found_size = 0;
      generate(d, [&](const Prog& p, const TypePtr& t) {
        if (!same_type(t, pb_.output_type)) return false;
        const std::size_t size = node_count(p);
        if (found && size >= found_size) return false;
        if (!is_solution(p, t)) return false;
        found = p;
        found_size = size;
        return false;
      });
      if (found) return number_occurrences(*found);
      if (d == pb_.depth_limit) break;
      // Pools are read while generating, so new terms join them afterwards.
      std::vector<std::pair<Prog, TypePtr>> fresh;
      generate(d, [&](const Prog& p, const TypePtr& t) {
        fresh.emplace_back(p, t);
        return false;
      });
      for (const auto& [p, t] : fresh) add_term(p, t, d);
    }
    return std::nullopt;
  }

 private:
  void note_depth(int d) {
    if (stats_ != nullptr) stats_->depth = d;
  }

  std::optional<std::vector<Value>> outputs(const Prog& p) {
    if (stats_ != nullptr) ++stats_->evaluated;
    std::vector<Value> out;
    out.reserve(pb_.examples.size());
    EvalOptions opts;
    opts.mode = Mode::train;
    try {
      for (const auto& ex : pb_.examples) out.push_back(eval(p, ex.inputs, opts));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    return out;
  }

  bool is_solution(const Prog& p, const TypePtr& t) {
    if (!same_type(t, pb_.output_type)) return false;
    const auto vals = outputs(p);
    if (!vals) return false;
    for (std::size_t i = 0; i < vals->size(); ++i) {
      if (!values_equal((*vals)[i], pb_.examples[i].output)) return false;
    }
    return true;
  }

  void add_term(const Prog& p, const TypePtr& t, int d) {
    const auto vals = outputs(p);
    if (!vals) return;
    const std::string key = type_key(t);
    std::string sig = key + "|";
    for (const auto& v : *vals) sig += value_signature(v) + ";";
    if (!seen_.insert(std::move(sig)).second) return;
    auto& bucket = buckets_[key];
    if (!bucket.type) bucket.type = t;
    bucket.terms.push_back(terms_.size());
    terms_.push_back(Term{p, t, d});
    if (stats_ != nullptr) ++stats_->pooled;
  }

  // Calls fn(term) for terms in type-order with depth in [lo, hi]; stops early
  // when fn returns true.
  template <class Fn>
  bool each_term(int lo, int hi, Fn&& fn) {
    for (const auto& [key, bucket] : buckets_) {
      for (std::size_t idx : bucket.terms) {
        const Term& t = terms_[idx];
        if (t.depth > hi) break;
        if (t.depth < lo) continue;
        if (fn(t)) return true;
      }
    }
    return false;
  }

  template <class Sink>
  bool generate(int d, Sink&& sink) {
    // application
    for (const Prog& comp : comps_) {
      const Op op = comp->op;
      if (arity(op) == 1) {
        if (each_term(d - 1, d - 1, [&](const Term& a) {
              const TypePtr r = component_result(op, {a.type});
              return r && sink(make_app(comp, a.prog), r);
            })) {
          return true;
        }
        continue;
      }
      if (each_term(1, d - 2, [&](const Term& a) {
            if (!component_accepts(op, {a.type})) return false;
            const Prog head = make_app(comp, a.prog);
            const int head_depth = a.depth + 1;
            const int lo = head_depth == d - 1 ? 1 : d - 1;
            return each_term(lo, d - 1, [&](const Term& b) {
              const TypePtr r = component_result(op, {a.type, b.type});
              return r && sink(make_app(head, b.prog), r);
            });
          })) {
        return true;
      }
    }
    // fold
    for (const Prog& comp : comps_) {
      if (arity(comp->op) != 2) continue;
      if (each_term(1, d - 1, [&](const Term& l) {
            if (l.type->kind != TypeKind::List) return false;
            const int lo = l.depth == d - 1 ? 1 : d - 1;
            return each_term(lo, d - 1, [&](const Term& b) {
              const TypePtr r = fold_result(comp->op, l.type->arg, b.type);
              return r && sink(make_fold(comp, l.prog, b.prog), r);
            });
          })) {
        return true;
      }
    }
    // map and filter share the unary-function enumeration
    for (int pass = 0; pass < 2; ++pass) {
      const bool is_filter = pass == 1;
      if (each_unary_fn(d - 1, [&](const Prog& f, Op op, const std::vector<TypePtr>& pre,
                                   int fdepth) {
            const int lo = fdepth == d - 1 ? 1 : d - 1;
            return each_term(lo, d - 1, [&](const Term& l) {
              if (l.type->kind != TypeKind::List) return false;
              auto args = pre;
              args.push_back(l.type->arg);
              const TypePtr r = component_result(op, args);
              if (!r) return false;
              if (is_filter) {
                return r->kind == TypeKind::Bool && sink(make_filter(f, l.prog), l.type);
              }
              return sink(make_map(f, l.prog), list_type(r));
            });
          })) {
        return true;
      }
    }
    // slice
    if (each_term(1, d - 1, [&](const Term& l) {
          if (l.type->kind != TypeKind::List) return false;
          return each_term(1, d - 1, [&](const Term& i) {
            if (i.type->kind != TypeKind::Int) return false;
            return each_term(1, d - 1, [&](const Term& j) {
              if (j.type->kind != TypeKind::Int) return false;
              if (std::max({l.depth, i.depth, j.depth}) != d - 1) return false;
              return sink(make_slice(l.prog, i.prog, j.prog), l.type);
            });
          });
        })) {
      return true;
    }
    // length
    return each_term(d - 1, d - 1, [&](const Term& l) {
      return l.type->kind == TypeKind::List && sink(make_length(l.prog), int_type());
    });
  }

  // Unary function terms of depth at most `limit`: bare unary components, then
  // binary components with their first argument supplied.
  template <class Fn>
  bool each_unary_fn(int limit, Fn&& fn) {
    for (const Prog& comp : comps_) {
      const Op op = comp->op;
      if (arity(op) == 1) {
        if (limit >= 1 && fn(comp, op, std::vector<TypePtr>{}, 1)) return true;
        continue;
      }
      if (each_term(1, limit - 1, [&](const Term& a) {
            if (!component_accepts(op, {a.type})) return false;
            return fn(make_app(comp, a.prog), op, std::vector<TypePtr>{a.type}, a.depth + 1);
          })) {
        return true;
      }
    }
    return false;
  }

  const EnumerationProblem& pb_;
  EnumerationStats* stats_;
  std::vector<Prog> comps_;
  std::vector<Term> terms_;
  std::map<std::string, Bucket> buckets_;
  std::set<std::string> seen_;
};

}  // namespace

std::optional<Prog> enumerate_smallest(const EnumerationProblem& problem,
                                       EnumerationStats* stats) {
  if (!problem.output_type) return std::nullopt;
  Enumerator e(problem, stats);
  return e.run();
}

}  // namespace pacsketch::dsl
