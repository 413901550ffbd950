#pragma once

// Differentiable loss components and their weighted combination. Accuracy is
// soft Dice, robustness is the negated soft mIoU of noise-injected logits,
// fairness penalizes subgroup spread of per-sample soft mIoU. Values come
// back with analytic gradients; all of them are finite-difference checked.

#include <cstdint>
#include <string>
#include <vector>

#include "fairseg/attributes.hpp"
#include "fairseg/homotopy.hpp"
#include "fairseg/tensor.hpp"

namespace fairseg {

enum class FairnessVariant { variance, pergroup };

FairnessVariant parse_fairness_variant(const std::string& token);
std::string to_string(FairnessVariant v);

struct ValueGrad {
  double value = 0.0;
  LogitMap grad;
};

struct BatchValueGrad {
  double value = 0.0;
  std::vector<LogitMap> grads;  // one per sample, aligned by index
};

inline constexpr double kLossEpsilon = 1e-6;

// Soft Dice loss over batch-flattened pixels, all C classes averaged.
// Gradient is w.r.t. probs.
ValueGrad dice_loss(const ProbMap& probs, const MaskTensor& gt,
                    double eps = kLossEpsilon);
BatchValueGrad dice_loss_batch(const std::vector<ProbMap>& probs,
                               const std::vector<const MaskTensor*>& gts,
                               double eps = kLossEpsilon);

// Differentiable IoU surrogate: per class I = sum p*g, U = sum (p + g - p*g),
// iou = (I+eps)/(U+eps), averaged over all C classes. Value in [0, 1].
// Gradient is w.r.t. probs.
ValueGrad soft_miou(const ProbMap& probs, const MaskTensor& gt,
                    double eps = kLossEpsilon);
BatchValueGrad soft_miou_batch(const std::vector<ProbMap>& probs,
                               const std::vector<const MaskTensor*>& gts,
                               double eps = kLossEpsilon);

// -soft_miou(softmax(logits + noise), gt) with noise ~ N(0, sigma_r^2) drawn
// deterministically from `seed` (plane-major order, sample-major in the
// batch form). Noise is a constant for the gradient; gradient is w.r.t.
// logits. Value in [-1, 0].
ValueGrad robustness_loss(const LogitMap& logits, const MaskTensor& gt,
                          double sigma_r, uint64_t seed,
                          double eps = kLossEpsilon);
BatchValueGrad robustness_loss_batch(const std::vector<LogitMap>& logits,
                                     const std::vector<const MaskTensor*>& gts,
                                     double sigma_r, uint64_t seed,
                                     double eps = kLossEpsilon);

// Subgroup spread of per-sample soft mIoU, averaged over the configured
// attributes. Subgroups absent from the batch contribute nothing; fewer
// than two present subgroups yields a zero term. Gradients are w.r.t. the
// per-sample probs.
BatchValueGrad fairness_loss_variance(const std::vector<ProbMap>& probs,
                                      const std::vector<const MaskTensor*>& gts,
                                      const std::vector<const AttributeRecord*>& attrs,
                                      const std::vector<std::string>& attributes,
                                      double eps = kLossEpsilon);
BatchValueGrad fairness_loss_pergroup(const std::vector<ProbMap>& probs,
                                      const std::vector<const MaskTensor*>& gts,
                                      const std::vector<const AttributeRecord*>& attrs,
                                      const std::vector<std::string>& attributes,
                                      double eps = kLossEpsilon);

// max - min of a score list; 0 for fewer than two entries. The pergroup
// fairness term reduces each attribute with this.
double pergroup_gap(const std::vector<double>& scores);

struct LossOptions {
  FairnessVariant fairness = FairnessVariant::variance;
  double sigma_r = 0.1;
  double epsilon = kLossEpsilon;
  uint64_t noise_seed = 0;
  std::vector<std::string> attributes;
};

struct LossBreakdown {
  double l_acc = 0.0;
  double l_rob = 0.0;
  double l_fair = 0.0;
  double l_total = 0.0;
  ScheduleWeights weights;
};

struct TotalLoss {
  LossBreakdown breakdown;
  std::vector<LogitMap> dlogits;  // gradient of l_total w.r.t. each sample's logits
};

// Weighted combination over one batch. Component values are always
// computed (they are logged); component gradients are skipped entirely when
// their weight is exactly zero, so a (1,0,0) run is bit-identical to a pure
// accuracy run.
TotalLoss total_loss(const std::vector<LogitMap>& logits,
                     const std::vector<const MaskTensor*>& gts,
                     const std::vector<const AttributeRecord*>& attrs,
                     const ScheduleWeights& weights, const LossOptions& opt);

}  // namespace fairseg
