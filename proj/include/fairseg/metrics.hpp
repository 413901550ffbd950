#pragma once

// Hard segmentation metrics: per-class IoU/Dice, dataset-level per-group
// mIoU, fairness variance, robustness degradation.

#include <optional>
#include <string>
#include <vector>

#include "fairseg/attributes.hpp"
#include "fairseg/tensor.hpp"

namespace fairseg {

struct ClasswiseReport {
  // absent when the class appears in neither mask
  std::vector<std::optional<double>> per_class_iou;
  double miou = 0.0;  // mean of present per-class IoU entries
  double dice = 0.0;  // same inclusion rule
};

// IoU_c = |pred=c & gt=c| / |pred=c | gt=c|, Dice_c = 2|&| / (|pred=c|+|gt=c|).
// Classes with an empty union are excluded from both means.
ClasswiseReport miou(const MaskTensor& pred, const MaskTensor& gt);

// Variant averaging over all C classes; a class absent from both masks
// contributes 1.0 (the limit of the smoothed ratio).
double miou_all_classes(const MaskTensor& pred, const MaskTensor& gt);

struct GroupReport {
  std::string attribute;
  std::optional<double> miou_when_0;
  std::optional<double> miou_when_1;
  double gap = 0.0;  // |miou_when_1 - miou_when_0|, 0 when a side is empty
  size_t count0 = 0;
  size_t count1 = 0;
  bool single_group = false;
};

// Dataset-level per-group mIoU: mean of per-sample miou values over the
// samples with attribute value 0 and value 1 separately. Lists are aligned
// by index.
GroupReport per_group_miou(const std::vector<MaskTensor>& preds,
                           const std::vector<MaskTensor>& gts,
                           const std::vector<AttributeRecord>& attrs,
                           const std::string& attribute);

// Population variance (divide by n); a single score gives 0.
double fairness_variance(const std::vector<double>& group_scores);

inline double robustness_degradation(double clean_miou, double perturbed_miou) {
  return clean_miou - perturbed_miou;
}

}  // namespace fairseg
