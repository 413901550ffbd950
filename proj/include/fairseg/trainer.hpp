#pragma once

// Mini-batch gradient descent with Adam under epoch-indexed homotopy
// weights. Deterministic end-to-end given the config seed and dataset.

#include <cstdint>
#include <string>
#include <vector>

#include "fairseg/dataset.hpp"
#include "fairseg/homotopy.hpp"
#include "fairseg/losses.hpp"
#include "fairseg/model.hpp"

namespace fairseg {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  int64_t step = 0;
  GradientSet m;
  GradientSet v;
};

AdamState make_adam_state(const ModelParams& params);

// Standard Adam with bias-corrected moments. Zero gradients leave the
// parameters untouched but still advance the step count.
void adam_step(ModelParams& params, const GradientSet& grads, AdamState& state,
               const AdamHyper& hyper);

enum class TrainMode { single, multi };

TrainMode parse_train_mode(const std::string& token);
std::string to_string(TrainMode mode);

struct TrainConfig {
  TrainMode mode = TrainMode::multi;
  ScheduleConfig schedule;  // total_epochs is overridden by `epochs`; ignored in single mode
  FairnessVariant fairness = FairnessVariant::variance;
  int epochs = 30;
  int batch_size = 8;
  AdamHyper adam;
  double sigma_r = 0.1;
  uint64_t seed = 42;
  std::vector<std::string> attributes;  // empty = every attribute in the dataset
};

struct EpochLogRow {
  int epoch = 0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double mean_l_acc = 0.0, mean_l_rob = 0.0, mean_l_fair = 0.0, mean_l_total = 0.0;
  double train_miou = 0.0;
  double wall_ms = 0.0;  // measured, the one non-deterministic column
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLogRow> log;
};

// Single mode fixes weights at (1,0,0); multi mode follows the schedule.
// Batches come from a seeded per-epoch shuffle; a short final batch is kept.
TrainResult train(const TrainConfig& cfg, const std::vector<DatasetRecord>& dataset);

}  // namespace fairseg
