#ifndef PACSKETCH_SKETCHER_HPP
#define PACSKETCH_SKETCHER_HPP

// Hole filling for full sketches. Holes are processed descendants-first; each
// of the m holes receives an equal delta/m share of the failure budget.

#include <cstddef>
#include <span>
#include <vector>

#include "pacsketch/estimators.hpp"
#include "pacsketch/parallel.hpp"
#include "pacsketch/sketch_ir.hpp"

namespace pacsketch {

/// Conditional mode keeps scores of examples with Q = 1. Implication mode keeps
/// one entry per example and uses -inf where Q = 0, since such an example is
/// satisfied by every threshold.
ScoreSample build_threshold_samples(const ir::Spec& spec, std::span<const ir::Valuation> data,
                                    const ir::ComponentRegistry& reg,
                                    ExecPolicy policy = ExecPolicy::parallel);

/// Bits z = 1(score <= threshold); conditional mode filters on Q, implication
/// mode emits (Q => z) for every example.
BitSample build_eps_samples(const ir::Spec& spec, std::span<const ir::Valuation> data,
                            const ir::ComponentRegistry& reg,
                            ExecPolicy policy = ExecPolicy::parallel);

enum class HoleKind { threshold, eps };

struct HoleRecord {
  ir::Path path;
  HoleKind kind = HoleKind::threshold;
  double value = 0.0;
  std::size_t n = 0;
  MistakeBudget k;        // threshold holes
  double nu_hat = 0.0;    // eps holes
  double spec_eps = 0.0;  // eps the threshold was calibrated for
  double delta_share = 0.0;
  bool starved = false;   // filled with +inf or eps = 1
};

struct SketchReport {
  ir::Expr completed;
  std::vector<HoleRecord> holes;

  bool any_starved() const;
};

struct SketchJob {
  ir::Expr program;
  std::span<const ir::Valuation> data;
  double delta = 0.05;
  const ir::ComponentRegistry* registry = &ir::default_registry();
  MistakeRule rule = MistakeRule::binomial;
  ExecPolicy policy = ExecPolicy::parallel;
};

/// Throws std::invalid_argument unless job.program is a full sketch.
SketchReport sketch(const SketchJob& job);

}  // namespace pacsketch

#endif  // PACSKETCH_SKETCHER_HPP
