#pragma once

// Binary netpbm I/O. Readers accept any header whitespace and '#' comments;
// writers emit the canonical single-whitespace header, so write(read(f))
// reproduces canonically-written files byte-for-byte.
//
//   PPM P6: "P6\n{w} {h}\n255\n" + w*h*3 payload bytes, value = byte/255
//   PGM P5: "P5\n{w} {h}\n255\n" + w*h payload bytes, raw class labels
//
// Image bytes quantize with round-half-up: byte = clamp(round(v*255), 0, 255).

#include <filesystem>

#include "fairseg/tensor.hpp"

namespace fairseg {

ImageTensor read_image(const std::filesystem::path& path);
void write_image(const ImageTensor& img, const std::filesystem::path& path);

// num_classes is supplied by the caller; every label must be < num_classes.
MaskTensor read_mask(const std::filesystem::path& path, int num_classes);
void write_mask(const MaskTensor& mask, const std::filesystem::path& path);

// Quantization used by write_image, exposed for tests.
inline int quantize_channel(double v) {
  const int b = static_cast<int>(v * 255.0 + 0.5);  // round half up; v >= 0
  return b < 0 ? 0 : (b > 255 ? 255 : b);
}

}  // namespace fairseg
