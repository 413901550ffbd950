#pragma once

#include <cstdint>
#include <vector>

#include "fairseg/errors.hpp"

namespace fairseg {

// H x W x 3 image, row-major, channels interleaved, values in [0, 1].
struct ImageTensor {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // size = height * width * 3

  double& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  double at(int y, int x, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  size_t pixel_count() const { return static_cast<size_t>(height) * width; }
};

inline ImageTensor make_image(int height, int width, double fill = 0.0) {
  if (height <= 0 || width <= 0) throw ConfigError("image dimensions must be positive");
  ImageTensor img;
  img.height = height;
  img.width = width;
  img.data.assign(static_cast<size_t>(height) * width * 3, fill);
  return img;
}

inline void validate(const ImageTensor& img) {
  if (img.height <= 0 || img.width <= 0) throw ConfigError("image dimensions must be positive");
  if (img.data.size() != static_cast<size_t>(img.height) * img.width * 3)
    throw ConfigError("image data length != height*width*3");
  for (double v : img.data)
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("image value outside [0,1]");
}

// H x W integer class labels in [0, num_classes).
struct MaskTensor {
  int height = 0;
  int width = 0;
  int num_classes = 0;
  std::vector<uint8_t> labels;  // size = height * width

  uint8_t& at(int y, int x) { return labels[static_cast<size_t>(y) * width + x]; }
  uint8_t at(int y, int x) const { return labels[static_cast<size_t>(y) * width + x]; }
  size_t pixel_count() const { return static_cast<size_t>(height) * width; }
};

inline MaskTensor make_mask(int height, int width, int num_classes, uint8_t fill = 0) {
  if (height <= 0 || width <= 0) throw ConfigError("mask dimensions must be positive");
  if (num_classes <= 0) throw ConfigError("num_classes must be positive");
  MaskTensor m;
  m.height = height;
  m.width = width;
  m.num_classes = num_classes;
  m.labels.assign(static_cast<size_t>(height) * width, fill);
  return m;
}

// H x W x C map of per-pixel channel values (logits or probabilities).
// Storage is plane-major: values[c * H*W + y*W + x]. Plane-major keeps each
// channel contiguous, which is what the compute kernels operate on.
struct LogitMap {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> values;  // size = channels * height * width

  size_t plane() const { return static_cast<size_t>(height) * width; }
  double* channel(int c) { return values.data() + static_cast<size_t>(c) * plane(); }
  const double* channel(int c) const { return values.data() + static_cast<size_t>(c) * plane(); }
  double& at(int c, int y, int x) { return values[static_cast<size_t>(c) * plane() + static_cast<size_t>(y) * width + x]; }
  double at(int c, int y, int x) const { return values[static_cast<size_t>(c) * plane() + static_cast<size_t>(y) * width + x]; }
};

using ProbMap = LogitMap;

inline LogitMap make_logit_map(int height, int width, int channels, double fill = 0.0) {
  LogitMap m;
  m.height = height;
  m.width = width;
  m.channels = channels;
  m.values.assign(static_cast<size_t>(height) * width * channels, fill);
  return m;
}

}  // namespace fairseg
