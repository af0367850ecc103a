#ifndef PACSKETCH_ENUMERATOR_HPP
#define PACSKETCH_ENUMERATOR_HPP

// Bottom-up, type-directed enumeration of list programs by depth with
// observational-equivalence pruning on the io examples (train semantics).
// Within a depth, productions are tried in the order application, fold, map,
// filter, slice, length; components follow the order of the component list.

#include <cstddef>
#include <optional>
#include <vector>

#include "pacsketch/listdsl.hpp"

namespace pacsketch::dsl {

struct IoExample {
  std::vector<Value> inputs;
  Value output;
};

struct EnumerationProblem {
  std::vector<IoExample> examples;
  std::vector<TypePtr> input_types;
  TypePtr output_type;
  std::vector<Op> components;
  int depth_limit = 5;
};

struct EnumerationStats {
  std::size_t evaluated = 0;  // candidate terms run on the examples
  std::size_t pooled = 0;     // distinct behaviours kept
  int depth = 0;              // depth of the answer, or the last depth tried
};

/// Smallest-depth program consistent with every example (fewest nodes, then
/// enumeration order, among equal depths), with occurrences numbered; nullopt
/// when none exists within the depth limit.
std::optional<Prog> enumerate_smallest(const EnumerationProblem& problem,
                                       EnumerationStats* stats = nullptr);

}  // namespace pacsketch::dsl

#endif  // PACSKETCH_ENUMERATOR_HPP
