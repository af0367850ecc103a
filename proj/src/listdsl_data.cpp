#include "pacsketch/listdsl_data.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pacsketch::dsl {

namespace {

void check_unit(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  }
}

struct Draw {
  bool correct = false;
  double confidence = 0.0;
};

Draw draw_outcome(double accuracy, double sharpness, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Draw d;
  d.correct = unit(rng) < accuracy;
  const double u = unit(rng);
  d.confidence = d.correct ? std::pow(u, 1.0 / sharpness) : u;
  return d;
}

Prediction predict(std::int64_t digit, double accuracy, double sharpness, std::mt19937_64& rng) {
  const Draw d = draw_outcome(accuracy, sharpness, rng);
  std::int64_t value = digit;
  if (!d.correct) {
    std::uniform_int_distribution<std::int64_t> other(0, 8);
    value = other(rng);
    if (value >= digit) ++value;
  }
  return Prediction{static_cast<double>(value), d.confidence};
}

}  // namespace

void PredictorConfig::validate() const {
  check_unit(accuracy, "accuracy");
  check_unit(fast_accuracy, "fast_accuracy");
  check_unit(misoriented_accuracy, "misoriented_accuracy");
  check_unit(flip_rate, "flip_rate");
  check_unit(flip_accuracy, "flip_accuracy");
  if (!(sharpness > 0.0)) throw std::invalid_argument("sharpness must be positive");
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ImageRecord draw_image(const PredictorConfig& cfg, std::mt19937_64& rng, std::int64_t digit,
                       std::string id) {
  if (digit < 0 || digit > 9) throw std::invalid_argument("digit must lie in 0..9");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ImageRecord r;
  r.id = std::move(id);
  r.truth_int = digit;
  r.truth_float = static_cast<double>(digit);
  r.pred = predict(digit, cfg.accuracy, cfg.sharpness, rng);
  r.pred_fast = predict(digit, cfg.fast_accuracy, cfg.sharpness, rng);
  r.pred_flipped = predict(digit, cfg.misoriented_accuracy, cfg.sharpness, rng);
  r.truth_flipped = unit(rng) < cfg.flip_rate;
  const Draw f = draw_outcome(cfg.flip_accuracy, cfg.sharpness, rng);
  r.flip_pred.flipped = f.correct ? r.truth_flipped : !r.truth_flipped;
  r.flip_pred.confidence = f.confidence;
  return r;
}

std::vector<ImageRecord> synth_predictor(const PredictorConfig& cfg, std::size_t n,
                                         std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> digit(0, 9);
  std::vector<ImageRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t d = digit(rng);
    out.push_back(draw_image(cfg, rng, d, "s" + std::to_string(seed % 100000) + "-" +
                                              std::to_string(i)));
  }
  return out;
}

std::shared_ptr<const ImageRecord> truth_image(std::int64_t digit, std::string id) {
  auto r = std::make_shared<ImageRecord>();
  r->id = id.empty() ? "d" + std::to_string(digit) : std::move(id);
  r->truth_int = digit;
  r->truth_float = static_cast<double>(digit);
  r->pred = Prediction{static_cast<double>(digit), 1.0};
  return r;
}

}  // namespace pacsketch::dsl
