#pragma once

// Procedural generator of attribute-annotated face-like scenes with a
// controllable group-difficulty bias. Classes: 0 background, 1 skin,
// 2 eyes, 3 mouth, 4 hair, 5 hat. Sample k draws from an independent
// substream keyed by k, so regeneration never depends on count.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairseg/dataset.hpp"

namespace fairseg {

namespace seg_class {
constexpr int kBackground = 0;
constexpr int kSkin = 1;
constexpr int kEyes = 2;
constexpr int kMouth = 3;
constexpr int kHair = 4;
constexpr int kHat = 5;
constexpr int kCount = 6;
}  // namespace seg_class

struct GenConfig {
  int count = 100;
  int size = 64;
  uint64_t seed = 42;
  int class_count = seg_class::kCount;  // fixed
  std::vector<std::pair<std::string, double>> attribute_probs = default_attribute_probs();
  // dark_skin samples get their skin/background contrast scaled by
  // (1 - bias_contrast) and pixel noise of this sigma added.
  double bias_contrast = 0.5;
  double bias_noise_sigma = 0.05;

  static std::vector<std::pair<std::string, double>> default_attribute_probs() {
    return {{"dark_skin", 0.3}, {"wearing_hat", 0.5}, {"big_eyes", 0.5}, {"smiling", 0.5}};
  }
};

void validate(const GenConfig& cfg);

std::vector<DatasetRecord> generate_dataset(const GenConfig& cfg);

// Seeded shuffle then split at round(train_fraction * n). Outputs keep the
// shuffled order and are disjoint; either side being empty is an error.
std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> split_dataset(
    const std::vector<DatasetRecord>& records, double train_fraction, uint64_t seed);

std::string gen_config_to_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const std::string& text);

}  // namespace fairseg
