#ifndef PACSKETCH_ALLOCATOR_HPP
#define PACSKETCH_ALLOCATOR_HPP

// Static analyses that split a program-level (eps, e) budget across component
// occurrences, assuming every list has at most N elements.
//
//   count_occurrences  how many times an occurrence runs in the unrolled program
//   error_bound        linear form sum_f a_f * e_f bounding the output error
//                      when every component meets its annotation
//
// Candidates come from the normalized grid {1,3,5}^d:
//   eps_f = x_f * eps / count_f      so sum_f count_f * eps_f = eps
//   e_f   = x_f * e / a_f            so sum_f a_f * e_f = e

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pacsketch/listdsl.hpp"

namespace pacsketch {

struct SymbolicError {
  std::map<int, double> coeffs;  // occurrence -> a_f; absent means zero

  double evaluate(const std::vector<double>& errs) const;
  bool is_zero() const;
  /// e.g. "3·e_f3" or "2·e_f2 + e_f4"; "0" for the zero form.
  std::string to_string() const;
};

std::size_t count_occurrences(const dsl::Prog& p, int occ, int N);
/// Counts for every occurrence, indexed by occurrence id.
std::vector<std::size_t> count_all(const dsl::Prog& p, int N);

SymbolicError error_bound(const dsl::Prog& p, int N);

struct GridSpec {
  std::vector<double> levels{1.0, 3.0, 5.0};
  bool single_point = false;  // only (1, ..., 1)
};

constexpr std::size_t kMaxGridDimension = 6;

/// Normalized points on the simplex, deduplicated, in lexicographic order of
/// the raw level vectors. d = 0 yields one empty point. Throws
/// std::invalid_argument for d > kMaxGridDimension.
std::vector<std::vector<double>> simplex_grid(std::size_t d, const GridSpec& grid);

/// One eps vector (indexed by occurrence) per grid point.
std::vector<std::vector<double>> candidate_eps(const dsl::Prog& p, double eps_total, int N,
                                               const GridSpec& grid);

/// One error-budget vector (indexed by occurrence, zero for occurrences outside
/// the error form) per grid point.
std::vector<std::vector<double>> candidate_errs(const dsl::Prog& p, double e_total, int N,
                                                const GridSpec& grid);

}  // namespace pacsketch

#endif  // PACSKETCH_ALLOCATOR_HPP
