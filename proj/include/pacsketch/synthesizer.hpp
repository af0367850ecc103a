#ifndef PACSKETCH_SYNTHESIZER_HPP
#define PACSKETCH_SYNTHESIZER_HPP

// End-to-end synthesis of a list program with a PAC guarantee:
//
//   1. enumerate the smallest program consistent with the io examples;
//   2. split the data in halves; pick N (fixed, or bounded from the synth half
//      at eps/2, leaving eps/2 for the program); sketch every (eps, e)
//      candidate from the allocator grid on the synth half and keep the one
//      returning non-bottom most often (first wins ties);
//   3. re-sketch the winner on the held-out sketch half.
//
// The winner is chosen from the synth half only, so the final gates enjoy the
// sketching guarantee over the sketch half.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pacsketch/allocator.hpp"
#include "pacsketch/enumerator.hpp"
#include "pacsketch/estimators.hpp"
#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/listdsl_lower.hpp"
#include "pacsketch/parallel.hpp"

namespace pacsketch {

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TaskSpec {
  std::string name;
  std::vector<dsl::IoExample> examples;
  std::vector<dsl::TypePtr> input_types;
  dsl::TypePtr output_type;
  std::vector<dsl::Op> components;
  double eps = 0.05;
  double delta = 0.05;
  double err = 6.0;
  std::optional<int> N = 3;  // nullopt: bound list lengths from data
  bool fast = false;         // calibrate and run the fast predictor
  int depth_limit = 5;
  std::optional<std::string> program;  // skips enumeration when set

  /// Throws std::invalid_argument on an inconsistent task.
  void validate() const;
};

/// Smallest program matching the examples, or the task's fixed program after
/// checking it against them. Throws SynthesisError when there is none.
dsl::Prog synthesize_partial_sketch(const TaskSpec& task);

/// Whether the train semantics of p reproduce every example.
bool satisfies_examples(const dsl::Prog& p, const std::vector<dsl::IoExample>& examples);

/// Seeded shuffle cut into (synth, sketch) halves; the odd example goes to the
/// synth half. Throws std::invalid_argument on fewer than two examples.
std::pair<std::vector<dsl::DslExample>, std::vector<dsl::DslExample>> split_data(
    std::span<const dsl::DslExample> data, std::uint64_t seed);

/// Fraction of examples on which test-mode evaluation returns non-bottom.
double score_program(const dsl::Prog& p, const dsl::Fill& fill,
                     std::span<const dsl::DslExample> data, bool fast = false,
                     ExecPolicy policy = ExecPolicy::parallel);

struct SynthesisOptions {
  GridSpec grid;
  MistakeRule rule = MistakeRule::binomial;
  std::uint64_t seed = 0;
  ExecPolicy policy = ExecPolicy::parallel;
  std::optional<dsl::Prog> partial;  // reuse an enumerated program
};

struct CandidateScore {
  std::vector<double> eps;
  std::vector<double> errs;
  double score = 0.0;
};

struct SynthesisResult {
  dsl::Prog program;
  int N = 0;
  std::optional<dsl::LengthBound> length;  // set when N was bounded from data
  double program_eps = 0.0;
  std::vector<double> eps;
  std::vector<double> errs;
  double score = 0.0;  // of the winner on the synth half
  std::size_t chosen = 0;
  std::vector<CandidateScore> candidates;
  dsl::DslSketch sketch;  // final calibration on the sketch half
  std::size_t synth_size = 0;
  std::size_t sketch_size = 0;
};

SynthesisResult synthesize(const TaskSpec& task, std::span<const dsl::DslExample> data,
                           const SynthesisOptions& opts = {});

}  // namespace pacsketch

#endif  // PACSKETCH_SYNTHESIZER_HPP
