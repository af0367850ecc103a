#ifndef PACSKETCH_LISTDSL_DATA_HPP
#define PACSKETCH_LISTDSL_DATA_HPP

// Synthetic digit images with a simulated classifier attached. Each image has
// a digit in 0..9; the classifier is right with probability `accuracy` and
// otherwise reports one of the other nine digits uniformly. Confidence is
// U^(1/sharpness) when right (mass near 1) and U(0,1) when wrong.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "pacsketch/listdsl.hpp"

namespace pacsketch::dsl {

struct PredictorConfig {
  double accuracy = 0.99;
  double sharpness = 20.0;
  double fast_accuracy = 0.985;
  double misoriented_accuracy = 0.2;  // accuracy on images that are upside down
  double flip_rate = 0.0;             // fraction of images stored upside down
  double flip_accuracy = 0.996;

  void validate() const;
};

/// splitmix64 finaliser; derives independent stream seeds from (base, stream).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream);

ImageRecord draw_image(const PredictorConfig& cfg, std::mt19937_64& rng, std::int64_t digit,
                       std::string id);

std::vector<ImageRecord> synth_predictor(const PredictorConfig& cfg, std::size_t n,
                                         std::uint64_t seed);

/// Builds an io-example image that only carries ground truth.
std::shared_ptr<const ImageRecord> truth_image(std::int64_t digit, std::string id = {});

struct DslExample {
  std::vector<Value> inputs;
};

}  // namespace pacsketch::dsl

#endif  // PACSKETCH_LISTDSL_DATA_HPP
