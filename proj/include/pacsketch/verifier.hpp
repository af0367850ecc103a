#ifndef PACSKETCH_VERIFIER_HPP
#define PACSKETCH_VERIFIER_HPP

// Statistical verification of complete programs, single-spec probabilistic
// assertions, and a sliding-window monitor that re-verifies as labelled
// examples stream in.
//
// The monitor reuses delta at every refresh without a multiple-testing
// correction, so over a long stream some false rejections are expected.

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "pacsketch/estimators.hpp"
#include "pacsketch/parallel.hpp"
#include "pacsketch/sketch_ir.hpp"

namespace pacsketch {

struct SpecVerdict {
  ir::Path path;
  ir::GuaranteeMode mode = ir::GuaranteeMode::conditional;
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t violations = 0;
  MistakeBudget k;
  bool pass = false;
};

struct VerifyReport {
  bool accepted = true;
  double delta_share = 0.0;
  std::vector<SpecVerdict> specs;
};

/// Throws std::invalid_argument if the program has holes.
VerifyReport verify(const ir::Expr& program, std::span<const ir::Valuation> data, double delta,
                    const ir::ComponentRegistry& reg = ir::default_registry(),
                    ExecPolicy policy = ExecPolicy::parallel);

/// `assertion` must be a complete Spec node; it is checked with the full delta.
bool passert_check(const ir::Expr& assertion, std::span<const ir::Valuation> data, double delta,
                   const ir::ComponentRegistry& reg = ir::default_registry());

struct MonitorConfig {
  std::size_t refresh_every = 10;  // K
  std::size_t min_window = 100;    // N
  std::size_t max_age = 200;       // T, in examples
  double delta = 0.05;

  void validate() const;
};

struct MonitorState {
  std::deque<std::pair<std::size_t, ir::Valuation>> window;  // (arrival index, example)
  std::size_t arrivals = 0;
  std::size_t since_check = 0;
  bool checked_once = false;
};

struct MonitorVerdict {
  std::size_t timestamp = 0;  // 1-based arrival index of the triggering example
  std::size_t window_size = 0;
  VerifyReport report;
};

std::optional<MonitorVerdict> monitor_record(MonitorState& state, const MonitorConfig& cfg,
                                             ir::Valuation example, const ir::Expr& program,
                                             const ir::ComponentRegistry& reg =
                                                 ir::default_registry());

}  // namespace pacsketch

#endif  // PACSKETCH_VERIFIER_HPP
