#pragma once

// Epoch-indexed weight schedules moving the loss mix from an accuracy-only
// corner to a balanced point on the simplex.

#include <string>
#include <vector>

namespace fairseg {

struct ScheduleWeights {
  double alpha = 1.0;  // accuracy
  double beta = 0.0;   // robustness
  double gamma = 0.0;  // fairness
};

enum class ScheduleKind { linear, sigmoid, piecewise };

ScheduleKind parse_schedule_kind(const std::string& token);
std::string to_string(ScheduleKind kind);

struct PiecewiseStage {
  double threshold = 0.0;  // progress fraction at which the stage begins
  ScheduleWeights weights;
};

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::linear;
  int total_epochs = 30;
  double alpha_start = 1.0;
  double alpha_end = 0.4;
  double beta_end = 0.3;
  double gamma_end = 0.3;
  double sigmoid_steepness = 10.0;
  std::vector<PiecewiseStage> stages = default_stages();

  static std::vector<PiecewiseStage> default_stages() {
    return {{0.0, {1.0, 0.0, 0.0}},
            {1.0 / 3.0, {0.6, 0.2, 0.2}},
            {2.0 / 3.0, {0.4, 0.3, 0.3}}};
  }
};

void validate(const ScheduleConfig& cfg);

// Weights at epoch t in [0, T). Progress s = t/(T-1), s = 0 when T = 1, so
// the final epoch reaches the end weights exactly.
ScheduleWeights weights_at(const ScheduleConfig& cfg, int t);

// All T rows, t = 0..T-1.
std::vector<ScheduleWeights> schedule_table(const ScheduleConfig& cfg);

}  // namespace fairseg
