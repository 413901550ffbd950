#include "fairseg/model.hpp"

#include <cmath>

#include "fairseg/errors.hpp"
#include "fairseg/kernels.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {

ModelParams init_params(uint64_t seed, int num_classes) {
  if (num_classes <= 0) throw ConfigError("num_classes must be positive");
  Rng rng = Rng::substream(seed, rng_streams::kParamInit);
  ModelParams p;
  p.num_classes = num_classes;
  const double bound1 = std::sqrt(6.0 / (kInputChannels * kConvKernel * kConvKernel));
  const double bound2 = std::sqrt(6.0 / kHiddenChannels);
  p.conv1_weights.resize(static_cast<size_t>(kHiddenChannels) * kInputChannels * 9);
  for (double& w : p.conv1_weights) w = rng.uniform(-bound1, bound1);
  p.conv1_bias.assign(kHiddenChannels, 0.0);
  p.conv2_weights.resize(static_cast<size_t>(num_classes) * kHiddenChannels);
  for (double& w : p.conv2_weights) w = rng.uniform(-bound2, bound2);
  p.conv2_bias.assign(num_classes, 0.0);
  return p;
}

GradientSet zero_gradients(const ModelParams& params) {
  GradientSet g;
  g.conv1_weights.assign(params.conv1_weights.size(), 0.0);
  g.conv1_bias.assign(params.conv1_bias.size(), 0.0);
  g.conv2_weights.assign(params.conv2_weights.size(), 0.0);
  g.conv2_bias.assign(params.conv2_bias.size(), 0.0);
  return g;
}

void accumulate(GradientSet& into, const GradientSet& add) {
  for (size_t i = 0; i < into.conv1_weights.size(); ++i) into.conv1_weights[i] += add.conv1_weights[i];
  for (size_t i = 0; i < into.conv1_bias.size(); ++i) into.conv1_bias[i] += add.conv1_bias[i];
  for (size_t i = 0; i < into.conv2_weights.size(); ++i) into.conv2_weights[i] += add.conv2_weights[i];
  for (size_t i = 0; i < into.conv2_bias.size(); ++i) into.conv2_bias[i] += add.conv2_bias[i];
}

std::vector<double> image_to_planes(const ImageTensor& img) {
  const size_t plane = img.pixel_count();
  std::vector<double> planes(plane * 3);
  for (size_t p = 0; p < plane; ++p)
    for (int c = 0; c < 3; ++c)
      planes[static_cast<size_t>(c) * plane + p] = img.data[p * 3 + c];
  return planes;
}

LogitMap forward(const ModelParams& params, const ImageTensor& img) {
  const auto& k = kernels::active();
  const int h = img.height, w = img.width;
  const size_t plane = img.pixel_count();
  const std::vector<double> in = image_to_planes(img);

  std::vector<double> pre(static_cast<size_t>(kHiddenChannels) * plane);
  k.conv3x3_forward(in.data(), kInputChannels, h, w, params.conv1_weights.data(),
                    params.conv1_bias.data(), kHiddenChannels, pre.data());
  std::vector<double> act(pre.size());
  k.relu_forward(pre.data(), pre.size(), act.data());

  LogitMap logits = make_logit_map(h, w, params.num_classes);
  k.conv1x1_forward(act.data(), kHiddenChannels, static_cast<int>(plane),
                    params.conv2_weights.data(), params.conv2_bias.data(),
                    params.num_classes, logits.values.data());
  return logits;
}

ProbMap softmax(const LogitMap& logits) {
  ProbMap probs = make_logit_map(logits.height, logits.width, logits.channels);
  kernels::active().softmax_planes(logits.values.data(), logits.channels,
                                   logits.plane(), probs.values.data());
  return probs;
}

LogitMap softmax_backward(const ProbMap& probs, const LogitMap& upstream) {
  LogitMap dz = make_logit_map(probs.height, probs.width, probs.channels);
  kernels::active().softmax_vjp(probs.values.data(), upstream.values.data(),
                                probs.channels, probs.plane(), dz.values.data());
  return dz;
}

GradientSet backward(const ModelParams& params, const ImageTensor& img,
                     const LogitMap& upstream) {
  if (upstream.height != img.height || upstream.width != img.width ||
      upstream.channels != params.num_classes)
    throw ConfigError("upstream gradient shape does not match logits shape");
  const auto& k = kernels::active();
  const int h = img.height, w = img.width;
  const size_t plane = img.pixel_count();
  const std::vector<double> in = image_to_planes(img);

  std::vector<double> pre(static_cast<size_t>(kHiddenChannels) * plane);
  k.conv3x3_forward(in.data(), kInputChannels, h, w, params.conv1_weights.data(),
                    params.conv1_bias.data(), kHiddenChannels, pre.data());
  std::vector<double> act(pre.size());
  k.relu_forward(pre.data(), pre.size(), act.data());

  GradientSet g = zero_gradients(params);
  k.conv1x1_param_grads(upstream.values.data(), params.num_classes,
                        static_cast<int>(plane), act.data(), kHiddenChannels,
                        g.conv2_weights.data(), g.conv2_bias.data());

  std::vector<double> dact(act.size());
  k.conv1x1_backward_data(upstream.values.data(), params.num_classes,
                          static_cast<int>(plane), params.conv2_weights.data(),
                          kHiddenChannels, dact.data());
  std::vector<double> dpre(act.size());
  k.relu_backward(pre.data(), dact.data(), pre.size(), dpre.data());

  k.conv3x3_param_grads(in.data(), kInputChannels, h, w, dpre.data(),
                        kHiddenChannels, g.conv1_weights.data(), g.conv1_bias.data());
  return g;
}

MaskTensor argmax_map(const LogitMap& logits) {
  MaskTensor mask = make_mask(logits.height, logits.width, logits.channels);
  const size_t plane = logits.plane();
  for (size_t p = 0; p < plane; ++p) {
    int best = 0;
    double best_v = logits.values[p];
    for (int c = 1; c < logits.channels; ++c) {
      const double v = logits.values[static_cast<size_t>(c) * plane + p];
      if (v > best_v) {
        best_v = v;
        best = c;
      }
    }
    mask.labels[p] = static_cast<uint8_t>(best);
  }
  return mask;
}

MaskTensor predict(const ModelParams& params, const ImageTensor& img) {
  return argmax_map(forward(params, img));
}

}  // namespace fairseg
