#ifndef PACSKETCH_LISTDSL_LOWER_HPP
#define PACSKETCH_LISTDSL_LOWER_HPP

// Bridges list programs to the sketch IR and calibrates their gates.
//
// Every annotated occurrence f becomes one specification over its component
// applications:
//
//   phi(score, ??) { desync* or not annotation_f }_{eps_f}^=>
//
// so the estimator bounds P(application violates its annotation and
// score > t) by eps_f, and the component returns only when score > t. Scores
// are confidences for learned components and |y1 - y2| for cond-<= / cond->=.
// An application whose train-mode counterpart cannot be matched (the two
// traces diverged earlier) always counts as a violation.
//
// Occurrences are calibrated one at a time (cond-flip, then predictions, then
// comparisons), with already-calibrated occurrences gated and the rest
// permissive. A run that produces a non-bottom output is identical under every
// such gating, so the per-occurrence bounds combine by the union bound.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pacsketch/estimators.hpp"
#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/parallel.hpp"
#include "pacsketch/sketch_ir.hpp"

namespace pacsketch::dsl {

// Valuation variable names of one application.
inline constexpr const char* kVarScore = "score";
inline constexpr const char* kVarPred = "pred";
inline constexpr const char* kVarY1 = "y1";
inline constexpr const char* kVarY2 = "y2";
inline constexpr const char* kVarFlip = "flip";
inline constexpr const char* kVarPredTrue = "pred*";
inline constexpr const char* kVarY1True = "y1*";
inline constexpr const char* kVarY2True = "y2*";
inline constexpr const char* kVarFlipTrue = "flip*";
inline constexpr const char* kVarDesync = "desync*";

/// The predicate an application must satisfy (err is used by predict_float only).
ir::Expr annotation_expr(Op op, double err);

/// Conjunction of one threshold-holed implication spec per occurrence, in
/// occurrence order. eps and errs are indexed by occurrence.
ir::Expr lower_to_sketch_ir(const Prog& p, const std::vector<double>& eps,
                            const std::vector<double>& errs);

/// Path of occurrence `occ`'s spec inside the conjunction built above.
ir::Path occurrence_path(std::size_t occ, std::size_t occurrences);

/// Application valuations of occurrence `occ`, gathered by running every
/// example in test mode under `gates` and in train mode, and pairing the traces.
std::vector<ir::Valuation> application_valuations(const Prog& p, int occ,
                                                  std::span<const DslExample> data,
                                                  const Fill& gates, bool fast,
                                                  ExecPolicy policy = ExecPolicy::parallel);

std::vector<int> calibration_order(const Prog& p);

struct OccurrenceRecord {
  int occ = -1;
  Op op = Op::PredictInt;
  std::size_t count = 0;     // unrolled multiplicity
  double eps = 0.0;
  double err = 0.0;
  std::size_t n = 0;         // calibration applications
  std::size_t violations = 0;
  MistakeBudget k;
  double threshold = 0.0;    // estimator output t
  double gate = 0.0;         // returns iff score >= gate
  bool starved = false;
};

struct DslSketchConfig {
  double delta = 0.05;
  int N = 3;
  MistakeRule rule = MistakeRule::binomial;
  bool fast = false;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct DslSketch {
  Fill fill;
  std::vector<OccurrenceRecord> records;  // calibration order
  std::size_t unrolled = 0;               // m, the sum of all counts
  double delta_share = 0.0;

  bool any_starved() const;
};

DslSketch sketch_dsl(const Prog& p, const std::vector<double>& eps,
                     const std::vector<double>& errs, std::span<const DslExample> data,
                     const DslSketchConfig& cfg);

/// Longest list among an example's inputs (nested lists included).
std::size_t max_list_length(const DslExample& ex);

struct LengthBound {
  std::optional<std::size_t> N;  // nullopt: not enough data
  double threshold = 0.0;
  MistakeBudget k;
  std::size_t n = 0;
};

/// N = floor(t) for the threshold t estimated on maximal list lengths.
/// Throws std::invalid_argument on empty data.
LengthBound length_bound(std::span<const DslExample> data, double eps_half, double delta_share);

/// Multiplicity of every occurrence after unrolling list operations N times,
/// obtained by emitting the straight-line instruction sequence.
std::vector<std::pair<int, std::size_t>> unroll_occurrences(const Prog& p, int N);

}  // namespace pacsketch::dsl

#endif  // PACSKETCH_LISTDSL_LOWER_HPP
