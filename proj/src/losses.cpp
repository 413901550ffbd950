#include "fairseg/losses.hpp"

#include <algorithm>
#include <cmath>

#include "fairseg/errors.hpp"
#include "fairseg/metrics.hpp"
#include "fairseg/model.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {

FairnessVariant parse_fairness_variant(const std::string& token) {
  if (token == "variance") return FairnessVariant::variance;
  if (token == "pergroup") return FairnessVariant::pergroup;
  throw ConfigError("unknown fairness variant `" + token + "` (valid: variance|pergroup)");
}

std::string to_string(FairnessVariant v) {
  return v == FairnessVariant::variance ? "variance" : "pergroup";
}

namespace {

void check_batch(const std::vector<ProbMap>& maps,
                 const std::vector<const MaskTensor*>& gts) {
  if (maps.empty() || maps.size() != gts.size())
    throw ConfigError("loss batch is empty or misaligned");
  for (size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].height != gts[i]->height || maps[i].width != gts[i]->width ||
        maps[i].channels != gts[i]->num_classes)
      throw ConfigError("probability map and mask shapes differ at batch index " +
                        std::to_string(i));
  }
}

// Per-class sums over a batch treated as one flattened pixel set:
// P_c = sum of probs, I_c = sum of probs where gt == c, G_c = |gt == c|.
// Accumulation runs sample-major then plane-major.
struct ClassSums {
  std::vector<double> prob_sum;   // P_c
  std::vector<double> inter_sum;  // I_c
  std::vector<double> gt_count;   // G_c
};

ClassSums class_sums(const std::vector<const ProbMap*>& probs,
                     const std::vector<const MaskTensor*>& gts) {
  const int c = probs[0]->channels;
  ClassSums s{std::vector<double>(c, 0.0), std::vector<double>(c, 0.0),
              std::vector<double>(c, 0.0)};
  for (size_t i = 0; i < probs.size(); ++i) {
    const ProbMap& pm = *probs[i];
    const MaskTensor& gt = *gts[i];
    const size_t plane = pm.plane();
    for (int k = 0; k < c; ++k) {
      const double* pp = pm.channel(k);
      double psum = 0.0, isum = 0.0;
      double gcount = 0.0;
      for (size_t p = 0; p < plane; ++p) {
        psum += pp[p];
        if (gt.labels[p] == k) {
          isum += pp[p];
          gcount += 1.0;
        }
      }
      s.prob_sum[k] += psum;
      s.inter_sum[k] += isum;
      s.gt_count[k] += gcount;
    }
  }
  return s;
}

std::vector<const ProbMap*> as_ptrs(const std::vector<ProbMap>& maps) {
  std::vector<const ProbMap*> ptrs;
  ptrs.reserve(maps.size());
  for (const auto& m : maps) ptrs.push_back(&m);
  return ptrs;
}

BatchValueGrad dice_core(const std::vector<const ProbMap*>& probs,
                         const std::vector<const MaskTensor*>& gts, double eps) {
  const int c = probs[0]->channels;
  const ClassSums s = class_sums(probs, gts);
  std::vector<double> dice(c), denom(c);
  double mean = 0.0;
  for (int k = 0; k < c; ++k) {
    denom[k] = s.prob_sum[k] + s.gt_count[k] + eps;
    dice[k] = (2.0 * s.inter_sum[k] + eps) / denom[k];
    mean += dice[k];
  }
  mean /= c;

  BatchValueGrad out;
  out.value = 1.0 - mean;
  out.grads.reserve(probs.size());
  const double scale = -1.0 / c;
  for (size_t i = 0; i < probs.size(); ++i) {
    const ProbMap& pm = *probs[i];
    LogitMap g = make_logit_map(pm.height, pm.width, c);
    const size_t plane = pm.plane();
    for (int k = 0; k < c; ++k) {
      double* gp = g.channel(k);
      const MaskTensor& gt = *gts[i];
      const double dk = dice[k], dn = denom[k];
      for (size_t p = 0; p < plane; ++p) {
        const double ind = gt.labels[p] == k ? 2.0 : 0.0;
        gp[p] = scale * (ind - dk) / dn;
      }
    }
    out.grads.push_back(std::move(g));
  }
  return out;
}

BatchValueGrad soft_miou_core(const std::vector<const ProbMap*>& probs,
                              const std::vector<const MaskTensor*>& gts,
                              double eps) {
  const int c = probs[0]->channels;
  const ClassSums s = class_sums(probs, gts);
  std::vector<double> inter(c), uni(c);
  double mean = 0.0;
  for (int k = 0; k < c; ++k) {
    inter[k] = s.inter_sum[k] + eps;
    uni[k] = s.prob_sum[k] + s.gt_count[k] - s.inter_sum[k] + eps;
    mean += inter[k] / uni[k];
  }
  mean /= c;

  BatchValueGrad out;
  out.value = mean;
  out.grads.reserve(probs.size());
  const double scale = 1.0 / c;
  for (size_t i = 0; i < probs.size(); ++i) {
    const ProbMap& pm = *probs[i];
    LogitMap g = make_logit_map(pm.height, pm.width, c);
    const size_t plane = pm.plane();
    for (int k = 0; k < c; ++k) {
      double* gp = g.channel(k);
      const MaskTensor& gt = *gts[i];
      const double ik = inter[k], uk = uni[k];
      const double u2 = uk * uk;
      for (size_t p = 0; p < plane; ++p) {
        // d iou_k / d p = (g*(U+eps) - (I+eps)*(1-g)) / (U+eps)^2
        const double gi = gt.labels[p] == k ? 1.0 : 0.0;
        gp[p] = scale * (gi * uk - ik * (1.0 - gi)) / u2;
      }
    }
    out.grads.push_back(std::move(g));
  }
  return out;
}

}  // namespace

BatchValueGrad dice_loss_batch(const std::vector<ProbMap>& probs,
                               const std::vector<const MaskTensor*>& gts,
                               double eps) {
  check_batch(probs, gts);
  return dice_core(as_ptrs(probs), gts, eps);
}

ValueGrad dice_loss(const ProbMap& probs, const MaskTensor& gt, double eps) {
  std::vector<ProbMap> batch{probs};
  BatchValueGrad r = dice_loss_batch(batch, {&gt}, eps);
  return {r.value, std::move(r.grads[0])};
}

BatchValueGrad soft_miou_batch(const std::vector<ProbMap>& probs,
                               const std::vector<const MaskTensor*>& gts,
                               double eps) {
  check_batch(probs, gts);
  return soft_miou_core(as_ptrs(probs), gts, eps);
}

ValueGrad soft_miou(const ProbMap& probs, const MaskTensor& gt, double eps) {
  std::vector<ProbMap> batch{probs};
  BatchValueGrad r = soft_miou_batch(batch, {&gt}, eps);
  return {r.value, std::move(r.grads[0])};
}

BatchValueGrad robustness_loss_batch(const std::vector<LogitMap>& logits,
                                     const std::vector<const MaskTensor*>& gts,
                                     double sigma_r, uint64_t seed,
                                     double eps) {
  check_batch(logits, gts);
  if (sigma_r < 0) throw ConfigError("sigma_r must be >= 0");

  std::vector<ProbMap> noisy_probs;
  noisy_probs.reserve(logits.size());
  Rng rng(seed);
  for (const LogitMap& lm : logits) {
    LogitMap noisy = lm;
    if (sigma_r > 0)
      for (double& v : noisy.values) v += rng.normal(0.0, sigma_r);
    noisy_probs.push_back(softmax(noisy));
  }

  BatchValueGrad soft = soft_miou_core(as_ptrs(noisy_probs), gts, eps);
  BatchValueGrad out;
  out.value = -soft.value;
  out.grads.reserve(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    LogitMap& up = soft.grads[i];
    for (double& v : up.values) v = -v;
    out.grads.push_back(softmax_backward(noisy_probs[i], up));
  }
  return out;
}

ValueGrad robustness_loss(const LogitMap& logits, const MaskTensor& gt,
                          double sigma_r, uint64_t seed, double eps) {
  std::vector<LogitMap> batch{logits};
  BatchValueGrad r = robustness_loss_batch(batch, {&gt}, sigma_r, seed, eps);
  return {r.value, std::move(r.grads[0])};
}

double pergroup_gap(const std::vector<double>& scores) {
  if (scores.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  return *hi - *lo;
}

namespace {

// Per-sample soft mIoU over the classes present in the sample's own ground
// truth. The subgroup scores must reflect segmentation quality alone, so
// classes a sample simply does not contain are left out of its score;
// otherwise scene composition (who wears a hat) dominates the subgroup
// means and drowns the group signal.
ValueGrad sample_score(const ProbMap& pm, const MaskTensor& gt, double eps) {
  const int c = pm.channels;
  const size_t plane = pm.plane();
  std::vector<double> inter(c, 0.0), psum(c, 0.0);
  std::vector<size_t> gcount(c, 0);
  for (int k = 0; k < c; ++k) {
    const double* pp = pm.channel(k);
    for (size_t p = 0; p < plane; ++p) {
      psum[k] += pp[p];
      if (gt.labels[p] == k) {
        inter[k] += pp[p];
        ++gcount[k];
      }
    }
  }
  int present = 0;
  double mean = 0.0;
  std::vector<double> ik(c, 0.0), uk(c, 0.0);
  for (int k = 0; k < c; ++k) {
    if (gcount[k] == 0) continue;
    ++present;
    ik[k] = inter[k] + eps;
    uk[k] = psum[k] + static_cast<double>(gcount[k]) - inter[k] + eps;
    mean += ik[k] / uk[k];
  }
  // masks are validated non-degenerate upstream; present >= 1 always holds
  mean /= present;

  ValueGrad out;
  out.value = mean;
  out.grad = make_logit_map(pm.height, pm.width, c);
  const double scale = 1.0 / present;
  for (int k = 0; k < c; ++k) {
    if (gcount[k] == 0) continue;
    double* gp = out.grad.channel(k);
    const double i2 = ik[k], u2 = uk[k] * uk[k];
    for (size_t p = 0; p < plane; ++p) {
      const double gi = gt.labels[p] == k ? 1.0 : 0.0;
      gp[p] = scale * (gi * uk[k] - i2 * (1.0 - gi)) / u2;
    }
  }
  return out;
}

// Shared fairness machinery. Per-sample scores feed subgroup means per
// attribute; the variant decides how subgroup scores reduce to a penalty
// and how the penalty differentiates back into per-sample coefficients.
BatchValueGrad fairness_core(const std::vector<ProbMap>& probs,
                             const std::vector<const MaskTensor*>& gts,
                             const std::vector<const AttributeRecord*>& attrs,
                             const std::vector<std::string>& attributes,
                             double eps, FairnessVariant variant) {
  check_batch(probs, gts);
  if (attrs.size() != probs.size())
    throw ConfigError("attribute batch is misaligned");
  if (attributes.empty())
    throw ConfigError("fairness loss configured with no attributes");

  const size_t n = probs.size();
  std::vector<double> sm(n);
  std::vector<LogitMap> dsm(n);
  for (size_t i = 0; i < n; ++i) {
    ValueGrad r = sample_score(probs[i], *gts[i], eps);
    sm[i] = r.value;
    dsm[i] = std::move(r.grad);
  }

  // coefficient of each sample's soft mIoU in the final value
  std::vector<double> coeff(n, 0.0);
  double value = 0.0;
  const double attr_scale = 1.0 / static_cast<double>(attributes.size());

  for (const std::string& name : attributes) {
    // subgroup index = attribute value; binary attributes give groups {0, 1}
    double sum[2] = {0.0, 0.0};
    size_t cnt[2] = {0, 0};
    std::vector<size_t> member(n);
    for (size_t i = 0; i < n; ++i) {
      const int v = attrs[i]->value_of(name);
      if (v < 0)
        throw ConfigError("attribute `" + name + "` missing on sample " + attrs[i]->sample_id);
      member[i] = static_cast<size_t>(v);
      sum[v] += sm[i];
      ++cnt[v];
    }
    std::vector<double> scores;
    std::vector<size_t> groups;  // group id per score, ascending
    for (size_t g = 0; g < 2; ++g)
      if (cnt[g] > 0) {
        scores.push_back(sum[g] / static_cast<double>(cnt[g]));
        groups.push_back(g);
      }
    if (scores.size() < 2) continue;  // no diversity in batch: zero term

    const auto m = static_cast<double>(scores.size());
    if (variant == FairnessVariant::variance) {
      double mean = 0.0;
      for (double s : scores) mean += s;
      mean /= m;
      double var = 0.0;
      for (double s : scores) var += (s - mean) * (s - mean);
      var /= m;
      value += attr_scale * var;
      // dVar/dS_g = (2/m)(S_g - mean)
      for (size_t gi = 0; gi < scores.size(); ++gi) {
        const double dv = (2.0 / m) * (scores[gi] - mean);
        const size_t g = groups[gi];
        const double per_sample = attr_scale * dv / static_cast<double>(cnt[g]);
        for (size_t i = 0; i < n; ++i)
          if (member[i] == g) coeff[i] += per_sample;
      }
    } else {
      // ties break toward the lowest-index subgroup
      size_t arg_hi = 0, arg_lo = 0;
      for (size_t gi = 1; gi < scores.size(); ++gi) {
        if (scores[gi] > scores[arg_hi]) arg_hi = gi;
        if (scores[gi] < scores[arg_lo]) arg_lo = gi;
      }
      value += attr_scale * (scores[arg_hi] - scores[arg_lo]);
      const size_t g_hi = groups[arg_hi], g_lo = groups[arg_lo];
      for (size_t i = 0; i < n; ++i) {
        if (member[i] == g_hi) coeff[i] += attr_scale / static_cast<double>(cnt[g_hi]);
        if (member[i] == g_lo) coeff[i] -= attr_scale / static_cast<double>(cnt[g_lo]);
      }
    }
  }

  BatchValueGrad out;
  out.value = value;
  out.grads.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    LogitMap g = std::move(dsm[i]);
    for (double& v : g.values) v *= coeff[i];
    out.grads.push_back(std::move(g));
  }
  return out;
}

}  // namespace

BatchValueGrad fairness_loss_variance(const std::vector<ProbMap>& probs,
                                      const std::vector<const MaskTensor*>& gts,
                                      const std::vector<const AttributeRecord*>& attrs,
                                      const std::vector<std::string>& attributes,
                                      double eps) {
  return fairness_core(probs, gts, attrs, attributes, eps, FairnessVariant::variance);
}

BatchValueGrad fairness_loss_pergroup(const std::vector<ProbMap>& probs,
                                      const std::vector<const MaskTensor*>& gts,
                                      const std::vector<const AttributeRecord*>& attrs,
                                      const std::vector<std::string>& attributes,
                                      double eps) {
  return fairness_core(probs, gts, attrs, attributes, eps, FairnessVariant::pergroup);
}

TotalLoss total_loss(const std::vector<LogitMap>& logits,
                     const std::vector<const MaskTensor*>& gts,
                     const std::vector<const AttributeRecord*>& attrs,
                     const ScheduleWeights& weights, const LossOptions& opt) {
  check_batch(logits, gts);

  std::vector<ProbMap> probs;
  probs.reserve(logits.size());
  for (const LogitMap& lm : logits) probs.push_back(softmax(lm));

  BatchValueGrad acc = dice_loss_batch(probs, gts, opt.epsilon);
  BatchValueGrad rob =
      robustness_loss_batch(logits, gts, opt.sigma_r, opt.noise_seed, opt.epsilon);
  BatchValueGrad fair =
      opt.fairness == FairnessVariant::variance
          ? fairness_loss_variance(probs, gts, attrs, opt.attributes, opt.epsilon)
          : fairness_loss_pergroup(probs, gts, attrs, opt.attributes, opt.epsilon);

  TotalLoss out;
  out.breakdown.l_acc = acc.value;
  out.breakdown.l_rob = rob.value;
  out.breakdown.l_fair = fair.value;
  out.breakdown.weights = weights;
  out.breakdown.l_total =
      weights.alpha * acc.value + weights.beta * rob.value + weights.gamma * fair.value;

  out.dlogits.reserve(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    // gradient terms with a zero weight are skipped, not added as zeros
    LogitMap up = make_logit_map(logits[i].height, logits[i].width, logits[i].channels);
    bool any_prob_term = false;
    if (weights.alpha != 0.0) {
      any_prob_term = true;
      for (size_t j = 0; j < up.values.size(); ++j)
        up.values[j] += weights.alpha * acc.grads[i].values[j];
    }
    if (weights.gamma != 0.0) {
      any_prob_term = true;
      for (size_t j = 0; j < up.values.size(); ++j)
        up.values[j] += weights.gamma * fair.grads[i].values[j];
    }
    LogitMap dl = any_prob_term
                      ? softmax_backward(probs[i], up)
                      : make_logit_map(logits[i].height, logits[i].width, logits[i].channels);
    if (weights.beta != 0.0)
      for (size_t j = 0; j < dl.values.size(); ++j)
        dl.values[j] += weights.beta * rob.grads[i].values[j];
    out.dlogits.push_back(std::move(dl));
  }
  return out;
}

}  // namespace fairseg
