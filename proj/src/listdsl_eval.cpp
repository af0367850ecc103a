#include <algorithm>
#include <cmath>
#include <limits>

#include "pacsketch/listdsl.hpp"

namespace pacsketch::dsl {

Fill permissive_fill(std::size_t occurrences) {
  return Fill{std::vector<double>(occurrences, -std::numeric_limits<double>::infinity())};
}

Fill restrictive_fill(std::size_t occurrences) {
  return Fill{std::vector<double>(occurrences, std::numeric_limits<double>::infinity())};
}

namespace {

double number(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v.v)) return *d;
  if (const auto* b = std::get_if<bool>(&v.v)) return *b ? 1.0 : 0.0;
  throw DslError("expected a number");
}

const ImageRef& image(const Value& v) {
  const auto* img = std::get_if<ImageRef>(&v.v);
  if (img == nullptr) throw DslError("expected an image");
  return *img;
}

class Evaluator {
 public:
  Evaluator(std::span<const Value> inputs, const EvalOptions& opts) : inputs_(inputs), o_(opts) {
    if (o_.mode == Mode::test && o_.fill == nullptr) {
      throw DslError("test semantics need a fill");
    }
  }

  Value eval(const Prog& p) {
    switch (p->kind) {
      case NodeKind::Input:
        if (p->index < 1 || static_cast<std::size_t>(p->index) > inputs_.size()) {
          throw DslError("input" + std::to_string(p->index) + " is not bound");
        }
        return inputs_[p->index - 1];
      case NodeKind::IntConst:
        return make_int(p->value);
      case NodeKind::Comp:
        return Value{Closure{p->op, p->occ, {}}};
      case NodeKind::App: {
        Value f = eval(p->kids[0]);
        if (f.is_bot()) return f;
        Value x = eval(p->kids[1]);
        return apply(closure(f), std::move(x));
      }
      case NodeKind::Fold: {
        Value f = eval(p->kids[0]);
        Value l = eval(p->kids[1]);
        Value acc = eval(p->kids[2]);
        if (f.is_bot() || l.is_bot() || acc.is_bot()) return bot();
        const Closure& fn = closure(f);
        for (const Value& item : list(l).items) {
          acc = apply(apply(fn, item), std::move(acc));
          if (acc.is_bot()) return acc;
        }
        return acc;
      }
      case NodeKind::Map: {
        Value f = eval(p->kids[0]);
        Value l = eval(p->kids[1]);
        if (f.is_bot() || l.is_bot()) return bot();
        const Closure& fn = closure(f);
        std::vector<Value> out;
        out.reserve(list(l).items.size());
        for (const Value& item : list(l).items) {
          Value r = apply(fn, item);
          if (r.is_bot()) return r;
          out.push_back(std::move(r));
        }
        return make_list(std::move(out));
      }
      case NodeKind::Filter: {
        Value f = eval(p->kids[0]);
        Value l = eval(p->kids[1]);
        if (f.is_bot() || l.is_bot()) return bot();
        const Closure& fn = closure(f);
        std::vector<Value> out;
        for (const Value& item : list(l).items) {
          Value keep = apply(fn, item);
          if (keep.is_bot()) return keep;
          if (std::get<bool>(keep.v)) out.push_back(item);
        }
        return make_list(std::move(out));
      }
      case NodeKind::Slice: {
        Value l = eval(p->kids[0]);
        Value from = eval(p->kids[1]);
        Value to = eval(p->kids[2]);
        if (l.is_bot() || from.is_bot() || to.is_bot()) return bot();
        const auto& items = list(l).items;
        const auto n = static_cast<std::int64_t>(items.size());
        const std::int64_t lo = std::clamp<std::int64_t>(std::get<std::int64_t>(from.v), 0, n);
        const std::int64_t hi = std::clamp<std::int64_t>(std::get<std::int64_t>(to.v), lo, n);
        return make_list(std::vector<Value>(items.begin() + lo, items.begin() + hi));
      }
      case NodeKind::Length: {
        Value l = eval(p->kids[0]);
        if (l.is_bot()) return l;
        return make_int(static_cast<std::int64_t>(list(l).items.size()));
      }
    }
    throw DslError("unknown node");
  }

 private:
  static const Closure& closure(const Value& v) {
    const auto* c = std::get_if<Closure>(&v.v);
    if (c == nullptr) throw DslError("expected a function");
    return *c;
  }

  static const ListV& list(const Value& v) {
    const auto* l = std::get_if<ListV>(&v.v);
    if (l == nullptr) throw DslError("expected a list");
    for (const Value& item : l->items) {
      if (item.is_bot()) throw DslError("list with a bottom element");
    }
    return *l;
  }

  Value apply(const Closure& fn, Value arg) {
    if (arg.is_bot()) return arg;
    Closure next = fn;
    next.args.push_back(std::move(arg));
    if (next.args.size() < arity(next.op)) return Value{std::move(next)};
    return invoke(next);
  }

  Value apply(Value fn, Value arg) {
    if (fn.is_bot()) return fn;
    return apply(closure(fn), std::move(arg));
  }

  double gate(int occ) const {
    if (occ < 0 || static_cast<std::size_t>(occ) >= o_.fill->gates.size()) {
      throw DslError("no gate for occurrence " + std::to_string(occ));
    }
    return o_.fill->gates[occ];
  }

  // Records the event and applies the gate in test mode.
  Value finish(AppEvent ev, Value out) {
    if (o_.mode == Mode::test) ev.returned = ev.score >= gate(ev.occ);
    if (o_.trace != nullptr) o_.trace->push_back(ev);
    return ev.returned ? out : bot();
  }

  const Prediction& prediction(const ImageRef& img) const {
    const ImageRecord& r = *img.record;
    if (o_.fast) {
      if (!r.pred_fast) throw DslError("image " + r.id + " has no fast prediction");
      return *r.pred_fast;
    }
    if (img.flipped && r.pred_flipped) return *r.pred_flipped;
    return r.pred;
  }

  Value invoke(const Closure& c) {
    const auto& a = c.args;
    switch (c.op) {
      case Op::Add:
      case Op::Sub:
      case Op::Max: {
        const auto* i0 = std::get_if<std::int64_t>(&a[0].v);
        const auto* i1 = std::get_if<std::int64_t>(&a[1].v);
        if (i0 && i1) {
          if (c.op == Op::Add) return make_int(*i0 + *i1);
          if (c.op == Op::Sub) return make_int(*i0 - *i1);
          return make_int(std::max(*i0, *i1));
        }
        const double x = number(a[0]);
        const double y = number(a[1]);
        if (c.op == Op::Add) return make_float(x + y);
        if (c.op == Op::Sub) return make_float(x - y);
        return make_float(std::max(x, y));
      }
      case Op::Le:
        return make_bool(number(a[0]) <= number(a[1]));
      case Op::Eq:
        return make_bool(number(a[0]) == number(a[1]));
      case Op::Ge:
        return make_bool(number(a[0]) >= number(a[1]));
      case Op::CondLe:
      case Op::CondGe: {
        AppEvent ev;
        ev.occ = c.occ;
        ev.op = c.op;
        ev.a1 = number(a[0]);
        ev.a2 = number(a[1]);
        const bool cmp = c.op == Op::CondLe ? ev.a1 <= ev.a2 : ev.a1 >= ev.a2;
        ev.value = cmp ? 1.0 : 0.0;
        ev.score = std::abs(ev.a1 - ev.a2);
        return finish(ev, make_bool(cmp));
      }
      case Op::PredictInt:
      case Op::PredictFloat: {
        const ImageRef& img = image(a[0]);
        const ImageRecord& r = *img.record;
        AppEvent ev;
        ev.occ = c.occ;
        ev.op = c.op;
        if (o_.mode == Mode::train) {
          if (c.op == Op::PredictInt) {
            if (!r.truth_int) throw DslError("image " + r.id + " has no integer truth");
            ev.value = static_cast<double>(*r.truth_int);
          } else {
            if (r.truth_float) {
              ev.value = *r.truth_float;
            } else if (r.truth_int) {
              ev.value = static_cast<double>(*r.truth_int);
            } else {
              throw DslError("image " + r.id + " has no truth");
            }
          }
          ev.score = std::numeric_limits<double>::infinity();
        } else {
          const Prediction& pr = prediction(img);
          ev.value = c.op == Op::PredictInt ? std::round(pr.value) : pr.value;
          ev.score = pr.confidence;
        }
        Value out = c.op == Op::PredictInt ? make_int(static_cast<std::int64_t>(ev.value))
                                           : make_float(ev.value);
        return finish(ev, std::move(out));
      }
      case Op::CondFlip: {
        const ImageRef& img = image(a[0]);
        const ImageRecord& r = *img.record;
        AppEvent ev;
        ev.occ = c.occ;
        ev.op = c.op;
        ImageRef out = img;
        if (o_.mode == Mode::train) {
          ev.value = img.flipped ? 1.0 : 0.0;
          ev.score = std::numeric_limits<double>::infinity();
          out.flipped = false;
        } else {
          // The record's prediction refers to its stored orientation.
          const bool turned = img.flipped != r.truth_flipped;
          const bool predicted = r.flip_pred.flipped != turned;
          ev.value = predicted ? 1.0 : 0.0;
          ev.score = r.flip_pred.confidence;
          if (predicted) out.flipped = !img.flipped;
        }
        return finish(ev, Value{out});
      }
    }
    throw DslError("unknown component");
  }

  std::span<const Value> inputs_;
  const EvalOptions& o_;
};

}  // namespace

Value eval(const Prog& p, std::span<const Value> inputs, const EvalOptions& opts) {
  Evaluator ev(inputs, opts);
  return ev.eval(p);
}

}  // namespace pacsketch::dsl
