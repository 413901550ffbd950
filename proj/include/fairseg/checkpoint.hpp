#pragma once

// JSON checkpoints. Weight arrays serialize with shortest round-trip
// decimals, so save -> load reproduces every binary64 value exactly.

#include <cstdint>
#include <filesystem>
#include <string>

#include "fairseg/model.hpp"

namespace fairseg {

struct RunMeta {
  std::string mode = "multi";
  std::string schedule = "linear";
  std::string fairness = "variance";
  int epochs = 0;
  uint64_t seed = 0;
  int batch_size = 0;
  double learning_rate = 0.0;
  double sigma_r = 0.0;
};

struct Checkpoint {
  ModelParams params;
  RunMeta meta;
};

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const ModelParams& params, const RunMeta& meta,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Serialized form, exposed so callers can hash or compare the exact bytes.
std::string checkpoint_to_json(const ModelParams& params, const RunMeta& meta);

}  // namespace fairseg
