#pragma once

// Evaluation sweeps and their CSV serializations. The CLI and the test
// suites share these so report bytes have exactly one producer.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairseg/dataset.hpp"
#include "fairseg/homotopy.hpp"
#include "fairseg/model.hpp"
#include "fairseg/trainer.hpp"

namespace fairseg {

struct EvalRow {
  std::string kind;  // "clean" or a perturbation token
  double severity = 0.0;
  double miou = 0.0;
  double dice = 0.0;
  double degradation = 0.0;  // clean miou - row miou
};

// One clean row plus one row per (kind, severity), kinds in their canonical
// order. Mean of per-sample mIoU/Dice over the dataset; per-sample
// perturbation seeds derive from (seed, kind, severity index, sample index).
std::vector<EvalRow> perturbation_sweep(const ModelParams& params,
                                        const std::vector<DatasetRecord>& data,
                                        const std::vector<double>& severities,
                                        uint64_t seed);

struct FairnessRow {
  std::string attribute;
  std::optional<double> miou_when_0;
  std::optional<double> miou_when_1;
  double gap = 0.0;
  double variance = 0.0;  // population variance of the present subgroup scores
  size_t count0 = 0;
  size_t count1 = 0;
  bool single_group = false;
};

// One row per attribute (all dataset attributes when `attributes` is empty).
std::vector<FairnessRow> fairness_report(const ModelParams& params,
                                         const std::vector<DatasetRecord>& data,
                                         const std::vector<std::string>& attributes = {});

// Checkpoint class count must match the dataset class count.
void ensure_class_match(const ModelParams& params, int dataset_classes);

std::string eval_csv(const std::vector<EvalRow>& rows);
std::string fairness_csv(const std::vector<FairnessRow>& rows);
std::string schedule_csv(const std::vector<ScheduleWeights>& rows);
std::string train_log_csv(const std::vector<EpochLogRow>& rows);

}  // namespace fairseg
