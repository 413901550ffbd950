#pragma once

// Two-layer segmentation network: 3x3 conv (zero padding) -> ReLU -> 1x1
// conv -> per-pixel logits. Small enough that every gradient is checked
// against central finite differences (see gradcheck).

#include <cstdint>
#include <string>
#include <vector>

#include "fairseg/tensor.hpp"

namespace fairseg {

inline constexpr int kInputChannels = 3;
inline constexpr int kHiddenChannels = 8;
inline constexpr int kConvKernel = 3;

struct ModelParams {
  int num_classes = 0;
  std::vector<double> conv1_weights;  // [hidden][3][3][3], flat
  std::vector<double> conv1_bias;     // [hidden]
  std::vector<double> conv2_weights;  // [num_classes][hidden], flat
  std::vector<double> conv2_bias;     // [num_classes]

  size_t count() const {
    return conv1_weights.size() + conv1_bias.size() + conv2_weights.size() + conv2_bias.size();
  }
};

struct GradientSet {
  std::vector<double> conv1_weights;
  std::vector<double> conv1_bias;
  std::vector<double> conv2_weights;
  std::vector<double> conv2_bias;
};

// Uniform init in +-sqrt(6/fan_in) per layer, zero biases.
ModelParams init_params(uint64_t seed, int num_classes);

GradientSet zero_gradients(const ModelParams& params);
void accumulate(GradientSet& into, const GradientSet& add);

LogitMap forward(const ModelParams& params, const ImageTensor& img);

// Numerically stabilized per-pixel softmax over channels.
ProbMap softmax(const LogitMap& logits);

// Gradient w.r.t. logits given an upstream gradient w.r.t. probs.
LogitMap softmax_backward(const ProbMap& probs, const LogitMap& upstream);

// Reverse-mode gradients of the network parameters for a scalar loss with
// the given gradient at the logits. Recomputes the forward activations.
GradientSet backward(const ModelParams& params, const ImageTensor& img,
                     const LogitMap& upstream);

// Per-pixel argmax (ties break toward the lowest class index).
MaskTensor predict(const ModelParams& params, const ImageTensor& img);
MaskTensor argmax_map(const LogitMap& logits);

// Interleaved HWC image -> plane-major channel buffer.
std::vector<double> image_to_planes(const ImageTensor& img);

}  // namespace fairseg
