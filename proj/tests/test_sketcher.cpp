#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "pacsketch/sketcher.hpp"

using namespace pacsketch;
using namespace pacsketch::ir;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Valuation> detector_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Valuation> out(n);
  for (auto& v : out) {
    const bool person = u(rng) < 0.3;
    v.inputs["conf"] = person ? std::pow(u(rng), 0.25) : std::pow(u(rng), 4.0);
    v.ground_truth["person"] = person;
  }
  return out;
}

Expr score_expr() { return apply("one_minus", {input("conf")}); }

// (k+1)-th largest of z plus half the gap to the next larger value, written
// directly from the definition.
double threshold_oracle(std::vector<double> z, std::size_t k) {
  std::sort(z.begin(), z.end(), std::greater<>());
  const double pivot = z[k];
  for (std::size_t i = k; i-- > 0;) {
    if (z[i] > pivot) return pivot + 0.5 * (z[i] - pivot);
  }
  return pivot + 1e-9 * (1.0 + std::fabs(pivot));
}

}  // namespace

TEST_CASE("conditional threshold hole") {
  const auto data = detector_data(2000, 11);
  SketchJob job;
  job.program = spec(score_expr(), std::nullopt, truth("person"), 0.05, GuaranteeMode::conditional);
  job.data = data;
  const SketchReport r = sketch(job);
  REQUIRE(r.holes.size() == 1);
  const HoleRecord& h = r.holes[0];

  std::vector<double> z;
  for (const auto& v : data) {
    if (std::get<bool>(v.ground_truth.at("person"))) {
      z.push_back(1.0 - std::get<double>(v.inputs.at("conf")));
    }
  }
  CHECK(h.kind == HoleKind::threshold);
  CHECK(h.n == z.size());
  REQUIRE(h.k.has_value());
  CHECK(*h.k == *compute_k(z.size(), 0.05, 0.05));
  CHECK(h.value == doctest::Approx(threshold_oracle(z, *h.k)).epsilon(1e-12));
  CHECK(h.delta_share == doctest::Approx(0.05));
  CHECK_FALSE(h.starved);
  CHECK(is_complete(r.completed));
  CHECK(*spec_at(r.completed, {}).threshold == h.value);
}

TEST_CASE("implication threshold hole keeps every example") {
  const auto data = detector_data(1000, 12);
  const Spec s{score_expr(), std::nullopt, truth("person"), 0.05, GuaranteeMode::implication};
  const ScoreSample z = build_threshold_samples(s, data, default_registry());
  REQUIRE(z.size() == data.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::get<bool>(data[i].ground_truth.at("person"))) {
      CHECK(z[i] == doctest::Approx(1.0 - std::get<double>(data[i].inputs.at("conf"))));
    } else {
      CHECK(z[i] == -kInf);
    }
  }
}

TEST_CASE("eps hole uses the Hoeffding lower bound") {
  const auto data = detector_data(1500, 13);
  SketchJob job;
  job.program = spec(score_expr(), 0.3, truth("person"), std::nullopt, GuaranteeMode::conditional);
  job.data = data;
  const SketchReport r = sketch(job);
  REQUIRE(r.holes.size() == 1);
  std::size_t n = 0;
  std::size_t ok = 0;
  for (const auto& v : data) {
    if (!std::get<bool>(v.ground_truth.at("person"))) continue;
    ++n;
    if (1.0 - std::get<double>(v.inputs.at("conf")) <= 0.3) ++ok;
  }
  const double mean = static_cast<double>(ok) / static_cast<double>(n);
  const double lb = std::max(0.0, mean - std::sqrt(std::log(1.0 / 0.05) / (2.0 * n)));
  CHECK(r.holes[0].kind == HoleKind::eps);
  CHECK(r.holes[0].n == n);
  CHECK(r.holes[0].value == doctest::Approx(1.0 - lb).epsilon(1e-12));
  CHECK(*spec_at(r.completed, {}).eps == doctest::Approx(1.0 - lb).epsilon(1e-12));
}

TEST_CASE("holes split delta evenly and run descendants first") {
  const auto data = detector_data(2000, 14);
  const Expr inner = spec(score_expr(), std::nullopt, truth("person"), 0.1, GuaranteeMode::conditional);
  const Expr outer = spec(apply("one_minus", {inner}), std::nullopt, truth("person"), 0.1,
                          GuaranteeMode::implication);
  SketchJob job;
  job.program = apply("and", {outer, spec(input("conf"), 0.5, truth("person"), std::nullopt,
                                          GuaranteeMode::implication)});
  job.data = data;
  job.delta = 0.06;
  const SketchReport r = sketch(job);
  REQUIRE(r.holes.size() == 3);
  CHECK(r.holes[0].path == Path{0, 0, 0});
  CHECK(r.holes[1].path == Path{0});
  CHECK(r.holes[2].path == Path{1});
  for (const auto& h : r.holes) CHECK(h.delta_share == doctest::Approx(0.02));
  CHECK(is_complete(r.completed));
}

TEST_CASE("starved threshold is +inf") {
  const auto data = detector_data(20, 15);
  SketchJob job;
  job.program = spec(score_expr(), std::nullopt, truth("person"), 0.01, GuaranteeMode::conditional);
  job.data = data;
  const SketchReport r = sketch(job);
  CHECK(r.any_starved());
  CHECK(r.holes[0].value == kInf);
  CHECK_FALSE(r.holes[0].k.has_value());
}

TEST_CASE("sketch rejects programs with a concrete spec") {
  const auto data = detector_data(10, 16);
  SketchJob job;
  job.program = spec(score_expr(), 0.3, truth("person"), 0.05, GuaranteeMode::conditional);
  job.data = data;
  CHECK_THROWS_AS(sketch(job), std::invalid_argument);
  job.program = Expr{};
  CHECK_THROWS_AS(sketch(job), std::invalid_argument);
}

TEST_CASE("zero rule is never looser than the binomial rule") {
  const auto data = detector_data(3000, 17);
  SketchJob job;
  job.program = spec(score_expr(), std::nullopt, truth("person"), 0.05, GuaranteeMode::conditional);
  job.data = data;
  const double t_binom = sketch(job).holes[0].value;
  job.rule = MistakeRule::zero;
  const double t_zero = sketch(job).holes[0].value;
  CHECK(t_zero >= t_binom);
}
