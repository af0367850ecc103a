#include <doctest.h>

#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "pacsketch/allocator.hpp"

using namespace pacsketch;
using namespace pacsketch::dsl;

namespace {

const char* kCondSum =
    "(fold + (filter (cond-<= (predict_int input1)) (map predict_float input2)) 0)";

// Distinct level vectors up to scaling, counted by reducing each integer
// vector by its gcd.
std::size_t distinct_directions(std::size_t d, const std::vector<long long>& levels) {
  std::set<std::vector<long long>> seen;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<long long> v(d);
    long long g = 0;
    for (std::size_t i = 0; i < d; ++i) g = std::gcd(g, v[i] = levels[idx[i]]);
    for (auto& x : v) x /= g;
    seen.insert(v);
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < levels.size()) break;
      idx[pos] = 0;
      if (pos == 0) return seen.size();
    }
  }
}

}  // namespace

TEST_CASE("conditional sum analyses") {
  const Prog p = parse_program(kCondSum);
  CHECK(count_all(p, 3) == std::vector<std::size_t>{3, 3, 3});
  for (int occ = 0; occ < 3; ++occ) CHECK(count_occurrences(p, occ, 3) == 3);
  const SymbolicError form = error_bound(p, 3);
  CHECK(form.to_string() == "3·e_f3");
  CHECK(form.coeffs.size() == 1);
  CHECK(form.coeffs.at(2) == doctest::Approx(3.0));

  const auto errs = candidate_errs(p, 6.0, 3, GridSpec{});
  REQUIRE(errs.size() == 1);
  CHECK(errs[0][0] == 0.0);
  CHECK(errs[0][1] == 0.0);
  CHECK(errs[0][2] == doctest::Approx(2.0));

  const auto eps = candidate_eps(p, 0.05, 3, GridSpec{});
  CHECK(eps.size() == distinct_directions(3, {1, 3, 5}));
  for (double e : eps[0]) CHECK(e == doctest::Approx(0.05 / 9.0));
  for (const auto& c : eps) {
    double used = 0.0;
    for (double e : c) used += 3.0 * e;
    CHECK(used == doctest::Approx(0.05));
  }
}

TEST_CASE("counts scale with N") {
  const Prog p = parse_program(kCondSum);
  CHECK(count_all(p, 1) == std::vector<std::size_t>{1, 1, 1});
  CHECK(count_all(p, 5) == std::vector<std::size_t>{5, 5, 5});
  const Prog q = parse_program("(predict_int input1)");
  CHECK(count_all(q, 7) == std::vector<std::size_t>{1});
}

TEST_CASE("error forms of simple programs") {
  CHECK(error_bound(parse_program("(fold + (map predict_float input1) 0)"), 3).to_string() ==
        "3·e_f1");
  CHECK(error_bound(parse_program("(fold max (map predict_float input1) 0)"), 3).to_string() ==
        "e_f1");
  CHECK(error_bound(parse_program("(fold + (map predict_int input1) 0)"), 3).is_zero());
  CHECK(error_bound(parse_program("(fold + (map predict_int input1) 0)"), 3).to_string() == "0");
}

TEST_CASE("SymbolicError evaluate") {
  SymbolicError f;
  f.coeffs[1] = 2.0;
  f.coeffs[3] = 1.0;
  CHECK(f.evaluate({0.0, 1.5, 9.0, 0.25}) == doctest::Approx(3.25));
  CHECK(f.to_string() == "2·e_f2 + e_f4");
}

TEST_CASE("simplex grid") {
  CHECK(simplex_grid(0, GridSpec{}) == std::vector<std::vector<double>>{{}});
  const auto g2 = simplex_grid(2, GridSpec{});
  CHECK(g2.size() == distinct_directions(2, {1, 3, 5}));
  CHECK(g2.size() == 7);
  // lexicographic in raw levels: (1,1) (1,3) (1,5) (3,1) ...
  CHECK(g2[0][0] == doctest::Approx(0.5));
  CHECK(g2[1][0] == doctest::Approx(0.25));
  CHECK(g2[1][1] == doctest::Approx(0.75));
  CHECK(g2[3][0] == doctest::Approx(0.75));
  CHECK(g2[3][1] == doctest::Approx(0.25));
  for (const auto& x : simplex_grid(4, GridSpec{})) {
    CHECK(std::accumulate(x.begin(), x.end(), 0.0) == doctest::Approx(1.0));
  }
  GridSpec single;
  single.single_point = true;
  CHECK(simplex_grid(3, single).size() == 1);
  CHECK_THROWS_AS(simplex_grid(kMaxGridDimension + 1, GridSpec{}), std::invalid_argument);
}

TEST_CASE("candidate_eps validates its budget") {
  const Prog p = parse_program(kCondSum);
  CHECK_THROWS_AS(candidate_eps(p, 0.0, 3, GridSpec{}), std::invalid_argument);
  CHECK_THROWS_AS(candidate_errs(p, -1.0, 3, GridSpec{}), std::invalid_argument);
}
