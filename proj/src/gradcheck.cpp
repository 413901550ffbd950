#include "fairseg/gradcheck.hpp"

#include <cmath>
#include <vector>

#include "fairseg/model.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {
namespace {

struct Fixture {
  std::vector<ImageTensor> images;
  std::vector<MaskTensor> masks;
  std::vector<AttributeRecord> attrs;
  ModelParams params;
  ScheduleWeights weights{0.4, 0.3, 0.3};
  LossOptions opt;
};

Fixture make_fixture(uint64_t seed, FairnessVariant variant) {
  Rng rng = Rng::substream(seed, rng_streams::kGradcheck);
  Fixture f;
  constexpr int kSide = 8;
  constexpr int kClasses = 6;
  for (int s = 0; s < 2; ++s) {
    ImageTensor img = make_image(kSide, kSide);
    for (double& v : img.data) v = rng.uniform();
    MaskTensor mask = make_mask(kSide, kSide, kClasses);
    for (uint8_t& l : mask.labels) l = static_cast<uint8_t>(rng.bounded(kClasses));
    f.images.push_back(std::move(img));
    f.masks.push_back(std::move(mask));
  }
  // sample 0 vs 1 differ on the first attribute so the fairness term is
  // active; the second attribute is constant, exercising the zero-term path
  f.attrs.push_back({"g0", {{"dark_skin", 0}, {"wearing_hat", 1}}});
  f.attrs.push_back({"g1", {{"dark_skin", 1}, {"wearing_hat", 1}}});
  f.params = init_params(rng.next_u64(), kClasses);
  f.opt.fairness = variant;
  f.opt.sigma_r = 0.1;
  f.opt.noise_seed = rng.next_u64();
  f.opt.attributes = {"dark_skin", "wearing_hat"};
  return f;
}

double batch_loss(const Fixture& f) {
  std::vector<LogitMap> logits;
  std::vector<const MaskTensor*> gts;
  std::vector<const AttributeRecord*> attrs;
  for (size_t i = 0; i < f.images.size(); ++i) {
    logits.push_back(forward(f.params, f.images[i]));
    gts.push_back(&f.masks[i]);
    attrs.push_back(&f.attrs[i]);
  }
  return total_loss(logits, gts, attrs, f.weights, f.opt).breakdown.l_total;
}

GradientSet analytic_gradients(const Fixture& f) {
  std::vector<LogitMap> logits;
  std::vector<const MaskTensor*> gts;
  std::vector<const AttributeRecord*> attrs;
  for (size_t i = 0; i < f.images.size(); ++i) {
    logits.push_back(forward(f.params, f.images[i]));
    gts.push_back(&f.masks[i]);
    attrs.push_back(&f.attrs[i]);
  }
  const TotalLoss tl = total_loss(logits, gts, attrs, f.weights, f.opt);
  GradientSet g = zero_gradients(f.params);
  for (size_t i = 0; i < f.images.size(); ++i)
    accumulate(g, backward(f.params, f.images[i], tl.dlogits[i]));
  return g;
}

void transpose_conv1_kxky(std::vector<double>& w) {
  for (size_t block = 0; block + 9 <= w.size(); block += 9)
    for (int ky = 0; ky < 3; ++ky)
      for (int kx = ky + 1; kx < 3; ++kx)
        std::swap(w[block + ky * 3 + kx], w[block + kx * 3 + ky]);
}

}  // namespace

GradcheckReport gradcheck(uint64_t seed, FairnessVariant variant, bool corrupt) {
  Fixture f = make_fixture(seed, variant);
  GradientSet analytic = analytic_gradients(f);
  if (corrupt) transpose_conv1_kxky(analytic.conv1_weights);

  struct Tensor {
    std::vector<double>* values;
    const std::vector<double>* grads;
    const char* name;
  };
  const Tensor tensors[] = {
      {&f.params.conv1_weights, &analytic.conv1_weights, "conv1_weights"},
      {&f.params.conv1_bias, &analytic.conv1_bias, "conv1_bias"},
      {&f.params.conv2_weights, &analytic.conv2_weights, "conv2_weights"},
      {&f.params.conv2_bias, &analytic.conv2_bias, "conv2_bias"},
  };

  GradcheckReport rep;
  for (const Tensor& t : tensors) {
    for (size_t i = 0; i < t.values->size(); ++i) {
      double& coord = (*t.values)[i];
      const double saved = coord;
      coord = saved + kGradcheckStep;
      const double up = batch_loss(f);
      coord = saved - kGradcheckStep;
      const double down = batch_loss(f);
      coord = saved;
      const double numeric = (up - down) / (2.0 * kGradcheckStep);
      const double a = (*t.grads)[i];
      const double rel = std::abs(a - numeric) /
                         std::max(1e-8, std::abs(a) + std::abs(numeric));
      if (rel > rep.max_rel_error) {
        rep.max_rel_error = rel;
        rep.worst_coordinate = std::string(t.name) + "[" + std::to_string(i) + "]";
      }
      ++rep.checked;
    }
  }
  rep.pass = rep.max_rel_error < kGradcheckTolerance;
  return rep;
}

}  // namespace fairseg
