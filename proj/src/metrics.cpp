#include "fairseg/metrics.hpp"

#include "fairseg/errors.hpp"

namespace fairseg {
namespace {

struct ClassCounts {
  std::vector<size_t> inter, pred, gt;
};

ClassCounts count_classes(const MaskTensor& pred, const MaskTensor& gt) {
  if (pred.height != gt.height || pred.width != gt.width)
    throw EvalError("mask dimensions differ");
  if (pred.num_classes != gt.num_classes)
    throw EvalError("mask class counts differ");
  const int c = pred.num_classes;
  ClassCounts cc{std::vector<size_t>(c, 0), std::vector<size_t>(c, 0), std::vector<size_t>(c, 0)};
  for (size_t i = 0; i < pred.labels.size(); ++i) {
    const uint8_t p = pred.labels[i];
    const uint8_t g = gt.labels[i];
    ++cc.pred[p];
    ++cc.gt[g];
    if (p == g) ++cc.inter[p];
  }
  return cc;
}

}  // namespace

ClasswiseReport miou(const MaskTensor& pred, const MaskTensor& gt) {
  const ClassCounts cc = count_classes(pred, gt);
  const int c = pred.num_classes;
  ClasswiseReport rep;
  rep.per_class_iou.resize(c);
  double iou_sum = 0.0, dice_sum = 0.0;
  int included = 0;
  for (int k = 0; k < c; ++k) {
    const size_t uni = cc.pred[k] + cc.gt[k] - cc.inter[k];
    if (uni == 0) continue;  // class absent from both masks
    const double iou = static_cast<double>(cc.inter[k]) / static_cast<double>(uni);
    const double dice = 2.0 * static_cast<double>(cc.inter[k]) /
                        static_cast<double>(cc.pred[k] + cc.gt[k]);
    rep.per_class_iou[k] = iou;
    iou_sum += iou;
    dice_sum += dice;
    ++included;
  }
  if (included == 0) throw EvalError("no class present in either mask");
  rep.miou = iou_sum / included;
  rep.dice = dice_sum / included;
  return rep;
}

double miou_all_classes(const MaskTensor& pred, const MaskTensor& gt) {
  const ClassCounts cc = count_classes(pred, gt);
  const int c = pred.num_classes;
  double sum = 0.0;
  for (int k = 0; k < c; ++k) {
    const size_t uni = cc.pred[k] + cc.gt[k] - cc.inter[k];
    sum += uni == 0 ? 1.0 : static_cast<double>(cc.inter[k]) / static_cast<double>(uni);
  }
  return sum / c;
}

GroupReport per_group_miou(const std::vector<MaskTensor>& preds,
                           const std::vector<MaskTensor>& gts,
                           const std::vector<AttributeRecord>& attrs,
                           const std::string& attribute) {
  if (preds.size() != gts.size() || preds.size() != attrs.size())
    throw EvalError("per_group_miou: input lists are not aligned");
  if (preds.empty()) throw EvalError("per_group_miou: empty input");

  GroupReport rep;
  rep.attribute = attribute;
  double sum0 = 0.0, sum1 = 0.0;
  for (size_t i = 0; i < preds.size(); ++i) {
    const int v = attrs[i].value_of(attribute);
    if (v < 0) throw EvalError("attribute `" + attribute + "` missing on sample " + attrs[i].sample_id);
    const double m = miou(preds[i], gts[i]).miou;
    if (v == 0) {
      sum0 += m;
      ++rep.count0;
    } else {
      sum1 += m;
      ++rep.count1;
    }
  }
  if (rep.count0 > 0) rep.miou_when_0 = sum0 / static_cast<double>(rep.count0);
  if (rep.count1 > 0) rep.miou_when_1 = sum1 / static_cast<double>(rep.count1);
  rep.single_group = rep.count0 == 0 || rep.count1 == 0;
  if (!rep.single_group) {
    const double d = *rep.miou_when_1 - *rep.miou_when_0;
    rep.gap = d < 0 ? -d : d;
  }
  return rep;
}

double fairness_variance(const std::vector<double>& group_scores) {
  if (group_scores.empty()) throw EvalError("fairness_variance over empty score list");
  const auto n = static_cast<double>(group_scores.size());
  double mean = 0.0;
  for (double s : group_scores) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : group_scores) var += (s - mean) * (s - mean);
  return var / n;
}

}  // namespace fairseg
