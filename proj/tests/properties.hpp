#ifndef PACSKETCH_TESTS_PROPERTIES_HPP
#define PACSKETCH_TESTS_PROPERTIES_HPP

// Randomised property suites over generated list programs, shared by the
// unit tests and the acceptance binary. Each suite returns how many cases it
// checked and a description of the first counterexample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pacsketch/allocator.hpp"
#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/listdsl_lower.hpp"

namespace pacsketch::props {

struct Outcome {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::string failure;

  bool ok() const { return failure.empty(); }
};

// Programs over input1 : image and input2 : list(image).
class ProgramGen {
 public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

  dsl::Prog next(int depth = 3) {
    const std::vector<dsl::TypePtr> inputs{dsl::image_type(), dsl::list_type(dsl::image_type())};
    while (true) {
      dsl::Prog p = pick(2) == 0 ? num(depth) : list(depth);
      p = dsl::number_occurrences(p);
      try {
        dsl::typecheck(p, inputs);
      } catch (const dsl::TypeError&) {
        continue;
      }
      if (dsl::occurrence_count(p) > 0) return p;
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  dsl::Prog image() {
    if (pick(3) == 0) return dsl::make_app(dsl::make_comp(dsl::Op::CondFlip), dsl::make_input(1));
    return dsl::make_input(1);
  }

  dsl::Prog images() {
    if (pick(3) == 0) return dsl::make_map(dsl::make_comp(dsl::Op::CondFlip), dsl::make_input(2));
    return dsl::make_input(2);
  }

  dsl::Op arith() {
    static const dsl::Op ops[] = {dsl::Op::Add, dsl::Op::Sub, dsl::Op::Max};
    return ops[pick(3)];
  }

  dsl::Op compare() {
    static const dsl::Op ops[] = {dsl::Op::Le, dsl::Op::Eq, dsl::Op::Ge, dsl::Op::CondLe,
                                  dsl::Op::CondGe};
    return ops[pick(5)];
  }

  dsl::Op predict() { return pick(2) == 0 ? dsl::Op::PredictInt : dsl::Op::PredictFloat; }

  dsl::Prog index() {
    if (pick(2) == 0) return dsl::make_const(static_cast<std::int64_t>(pick(3)));
    return dsl::make_app(dsl::make_comp(dsl::Op::PredictInt), image());
  }

  dsl::Prog num(int d) {
    const std::size_t choice = d <= 0 ? pick(2) : pick(6);
    switch (choice) {
      case 0:
        return dsl::make_app(dsl::make_comp(predict()), image());
      case 1:
        return dsl::make_const(static_cast<std::int64_t>(pick(4)));
      case 2:
      case 3:
        return dsl::make_fold(dsl::make_comp(arith()), list(d - 1), num(d - 1));
      case 4:
        return dsl::make_length(list(d - 1));
      default:
        return dsl::make_app(dsl::make_app(dsl::make_comp(arith()), num(d - 1)), num(d - 1));
    }
  }

  dsl::Prog list(int d) {
    const std::size_t choice = d <= 0 ? 0 : pick(5);
    switch (choice) {
      case 0:
        return dsl::make_map(dsl::make_comp(predict()), images());
      case 1:
        return dsl::make_filter(dsl::make_app(dsl::make_comp(compare()), num(d - 1)), list(d - 1));
      case 2:
        return dsl::make_slice(list(d - 1), index(), index());
      case 3:
        return dsl::make_map(dsl::make_app(dsl::make_comp(arith()), num(d - 1)), list(d - 1));
      default:
        return dsl::make_map(dsl::make_comp(predict()), images());
    }
  }

  std::mt19937_64 rng_;
};

struct InputGen {
  dsl::PredictorConfig cfg;
  std::mt19937_64 rng;

  InputGen(dsl::PredictorConfig c, std::uint64_t seed) : cfg(c), rng(seed) {}

  dsl::Value image() {
    const auto d = std::uniform_int_distribution<std::int64_t>(0, 9)(rng);
    return dsl::make_image(std::make_shared<const dsl::ImageRecord>(dsl::draw_image(cfg, rng, d, "p")));
  }

  std::vector<dsl::Value> inputs(std::size_t len) {
    std::vector<dsl::Value> items;
    for (std::size_t i = 0; i < len; ++i) items.push_back(image());
    return {image(), dsl::make_list(std::move(items))};
  }

  std::size_t length(std::size_t max_len) {
    return std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
  }
};

inline dsl::PredictorConfig perfect_predictor() {
  dsl::PredictorConfig cfg;
  cfg.accuracy = 1.0;
  cfg.fast_accuracy = 1.0;
  cfg.misoriented_accuracy = 1.0;
  cfg.flip_accuracy = 1.0;
  cfg.flip_rate = 0.3;
  return cfg;
}

inline dsl::Value run(const dsl::Prog& p, const std::vector<dsl::Value>& in, dsl::Mode mode,
                      const dsl::Fill* fill, std::vector<dsl::AppEvent>* trace = nullptr) {
  dsl::EvalOptions o;
  o.mode = mode;
  o.fill = fill;
  o.trace = trace;
  return dsl::eval(p, in, o);
}

/// Closing any single occurrence yields bottom exactly when that occurrence
/// runs, for every occurrence of every generated program.
inline Outcome bot_absorption(std::size_t programs, std::uint64_t seed) {
  Outcome out;
  ProgramGen gen(seed);
  InputGen data(dsl::PredictorConfig{}, seed + 1);
  for (std::size_t i = 0; i < programs && out.ok(); ++i) {
    const dsl::Prog p = gen.next();
    const std::size_t m = dsl::occurrence_count(p);
    for (int rep = 0; rep < 3 && out.ok(); ++rep) {
      const auto in = data.inputs(data.length(4));
      const dsl::Fill open = dsl::permissive_fill(m);
      std::vector<dsl::AppEvent> trace;
      const dsl::Value full = run(p, in, dsl::Mode::test, &open, &trace);
      if (full.is_bot()) {
        out.failure = "permissive gates abstained: " + dsl::print_program(p);
        break;
      }
      std::vector<bool> ran(m, false);
      for (const auto& ev : trace) ran[static_cast<std::size_t>(ev.occ)] = true;
      for (std::size_t occ = 0; occ < m; ++occ) {
        dsl::Fill closed = open;
        closed.gates[occ] = std::numeric_limits<double>::infinity();
        const bool bot = run(p, in, dsl::Mode::test, &closed).is_bot();
        ++out.checked;
        if (bot != ran[occ]) {
          out.failure = "occurrence f" + std::to_string(occ + 1) + " of " + dsl::print_program(p) +
                        (bot ? " abstained without running" : " ran without abstaining");
          break;
        }
      }
      // bottom inputs are absorbed as well
      for (std::size_t k = 0; k < in.size() && out.ok(); ++k) {
        auto holed = in;
        holed[k] = dsl::bot();
        std::vector<dsl::AppEvent> t2;
        const dsl::Value v = run(p, holed, dsl::Mode::test, &open, &t2);
        ++out.checked;
        const std::string used = "input" + std::to_string(k + 1);
        if (dsl::print_program(p).find(used) != std::string::npos && !v.is_bot()) {
          out.failure = "bottom " + used + " was not absorbed by " + dsl::print_program(p);
        }
      }
    }
  }
  return out;
}

/// Under a perfect predictor and open gates, test semantics reproduce train
/// semantics.
inline Outcome train_test_agreement(std::size_t programs, std::uint64_t seed) {
  Outcome out;
  ProgramGen gen(seed);
  InputGen data(perfect_predictor(), seed + 1);
  for (std::size_t i = 0; i < programs && out.ok(); ++i) {
    const dsl::Prog p = gen.next();
    const dsl::Fill open = dsl::permissive_fill(dsl::occurrence_count(p));
    for (int rep = 0; rep < 3; ++rep) {
      const auto in = data.inputs(data.length(4));
      const dsl::Value train = run(p, in, dsl::Mode::train, nullptr);
      const dsl::Value test = run(p, in, dsl::Mode::test, &open);
      ++out.checked;
      if (!dsl::values_equal(train, test)) {
        out.failure = dsl::print_program(p) + ": train " + dsl::value_signature(train) +
                      " vs test " + dsl::value_signature(test);
        break;
      }
    }
  }
  return out;
}

/// When every float prediction is within e of the truth, every integer
/// prediction is right and every cond-comparison agrees with the truth, the
/// test output lies within the static error bound of the train output. Cases
/// where a cond-comparison flips fall outside the premise and are skipped;
/// crisp comparisons only see integers, which the premise keeps exact.
inline Outcome error_bound_soundness(std::size_t cases, std::uint64_t seed) {
  Outcome out;
  ProgramGen gen(seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_int_distribution<std::int64_t> digit(0, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int N = 3;
  std::size_t attempts = 0;
  while (out.checked < cases && out.ok() && attempts < 20 * cases) {
    ++attempts;
    const dsl::Prog p = gen.next();
    const std::size_t m = dsl::occurrence_count(p);
    const double e = 0.4 * unit(rng);
    auto noisy = [&]() {
      auto r = std::make_shared<dsl::ImageRecord>();
      r->truth_int = digit(rng);
      r->truth_float = static_cast<double>(*r->truth_int);
      r->pred = dsl::Prediction{*r->truth_float + e * (2.0 * unit(rng) - 1.0), 1.0};
      return dsl::make_image(r);
    };
    std::vector<dsl::Value> items;
    const std::size_t len = 1 + static_cast<std::size_t>(unit(rng) * N);
    for (std::size_t k = 0; k < std::min<std::size_t>(len, N); ++k) items.push_back(noisy());
    const std::vector<dsl::Value> in{noisy(), dsl::make_list(std::move(items))};

    std::vector<dsl::AppEvent> tt, te;
    const dsl::Fill open = dsl::permissive_fill(m);
    const dsl::Value train = run(p, in, dsl::Mode::train, nullptr, &tt);
    const dsl::Value test = run(p, in, dsl::Mode::test, &open, &te);
    bool premise = tt.size() == te.size();
    for (std::size_t k = 0; premise && k < tt.size(); ++k) {
      const bool cmp = tt[k].op == dsl::Op::CondLe || tt[k].op == dsl::Op::CondGe;
      if (cmp && tt[k].value != te[k].value) premise = false;
    }
    if (!premise) {
      ++out.skipped;
      continue;
    }
    const std::vector<double> errs(m, e);
    const double bound = error_bound(p, N).evaluate(errs);
    double diff = 0.0;
    try {
      diff = dsl::output_error(train, test);
    } catch (const dsl::DslError& ex) {
      out.failure = dsl::print_program(p) + ": outputs differ in shape (" + ex.what() + ")";
      break;
    }
    ++out.checked;
    if (diff > bound + 1e-9) {
      out.failure = dsl::print_program(p) + ": error " + std::to_string(diff) + " exceeds bound " +
                    std::to_string(bound) + " (" + error_bound(p, N).to_string() + ", e=" +
                    std::to_string(e) + ")";
    }
  }
  if (out.ok() && out.checked < cases) out.failure = "too few cases satisfied the premise";
  return out;
}

/// The count analysis agrees with the unrolled instruction sequence, and no
/// occurrence runs more often than counted on lists of at most N elements.
inline Outcome count_unroll_equality(std::size_t programs, std::uint64_t seed) {
  Outcome out;
  ProgramGen gen(seed);
  InputGen data(perfect_predictor(), seed + 1);
  for (std::size_t i = 0; i < programs && out.ok(); ++i) {
    const dsl::Prog p = gen.next();
    const std::size_t m = dsl::occurrence_count(p);
    for (int N = 1; N <= 4 && out.ok(); ++N) {
      const auto counts = count_all(p, N);
      const auto unrolled = dsl::unroll_occurrences(p, N);
      ++out.checked;
      if (unrolled.size() != counts.size()) {
        out.failure = dsl::print_program(p) + ": occurrence sets differ";
        break;
      }
      for (const auto& [occ, c] : unrolled) {
        if (counts[static_cast<std::size_t>(occ)] != c) {
          out.failure = dsl::print_program(p) + ": f" + std::to_string(occ + 1) + " counted " +
                        std::to_string(counts[occ]) + ", unrolled " + std::to_string(c);
        }
      }
      const auto in = data.inputs(static_cast<std::size_t>(N));
      const dsl::Fill open = dsl::permissive_fill(m);
      std::vector<dsl::AppEvent> trace;
      run(p, in, dsl::Mode::test, &open, &trace);
      std::vector<std::size_t> seen(m, 0);
      for (const auto& ev : trace) ++seen[static_cast<std::size_t>(ev.occ)];
      for (std::size_t occ = 0; occ < m && out.ok(); ++occ) {
        if (seen[occ] > counts[occ]) {
          out.failure = dsl::print_program(p) + ": f" + std::to_string(occ + 1) + " ran " +
                        std::to_string(seen[occ]) + " times, counted " + std::to_string(counts[occ]);
        }
      }
    }
  }
  return out;
}

}  // namespace pacsketch::props

#endif  // PACSKETCH_TESTS_PROPERTIES_HPP
