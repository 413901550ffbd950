#include "fairseg/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "fairseg/errors.hpp"
#include "fairseg/kernels.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {

PerturbKind parse_perturb_kind(const std::string& token) {
  for (PerturbKind k : all_perturb_kinds())
    if (to_string(k) == token) return k;
  throw ConfigError("unknown perturbation kind `" + token +
                    "` (valid: gaussian_noise|blur|occlusion|salt_pepper|brightness|darkness)");
}

std::string to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::gaussian_noise: return "gaussian_noise";
    case PerturbKind::blur: return "blur";
    case PerturbKind::occlusion: return "occlusion";
    case PerturbKind::salt_pepper: return "salt_pepper";
    case PerturbKind::brightness: return "brightness";
    case PerturbKind::darkness: return "darkness";
  }
  return "gaussian_noise";
}

const std::vector<PerturbKind>& all_perturb_kinds() {
  static const std::vector<PerturbKind> kinds{
      PerturbKind::gaussian_noise, PerturbKind::blur,       PerturbKind::occlusion,
      PerturbKind::salt_pepper,    PerturbKind::brightness, PerturbKind::darkness,
  };
  return kinds;
}

namespace {

Rng spec_rng(const PerturbSpec& spec) {
  // kind folded into the stream so equal seeds across kinds stay independent
  return Rng::substream(Rng::substream_seed(spec.seed, rng_streams::kPerturb),
                        static_cast<uint64_t>(spec.kind));
}

ImageTensor gaussian_noise(const ImageTensor& img, double sigma, Rng rng) {
  ImageTensor out = img;
  if (sigma > 0)
    for (double& v : out.data) v = std::clamp(v + rng.normal(0.0, sigma), 0.0, 1.0);
  return out;
}

ImageTensor box_blur(const ImageTensor& img, int radius) {
  if (radius == 0) return img;
  const auto& k = kernels::active();
  const size_t plane = img.pixel_count();
  std::vector<double> chan(plane), blurred(plane);
  ImageTensor out = img;
  for (int c = 0; c < 3; ++c) {
    for (size_t p = 0; p < plane; ++p) chan[p] = img.data[p * 3 + c];
    k.box_blur_plane(chan.data(), img.height, img.width, radius, blurred.data());
    for (size_t p = 0; p < plane; ++p) out.data[p * 3 + c] = blurred[p];
  }
  return out;
}

ImageTensor occlusion(const ImageTensor& img, double severity, Rng rng) {
  ImageTensor out = img;
  const double area = severity * static_cast<double>(img.pixel_count());
  if (area <= 0.0) return out;
  // aspect = w/h uniform in [0.5, 2]; floor keeps w*h <= area
  const double aspect = rng.uniform(0.5, 2.0);
  const int rw = std::max(1, static_cast<int>(std::floor(std::sqrt(area * aspect))));
  const int rh = std::max(1, static_cast<int>(std::floor(std::sqrt(area / aspect))));
  const int x0 = static_cast<int>(rng.bounded(static_cast<uint64_t>(img.width)));
  const int y0 = static_cast<int>(rng.bounded(static_cast<uint64_t>(img.height)));
  const int x1 = std::min(img.width, x0 + rw);
  const int y1 = std::min(img.height, y0 + rh);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = 0.5;
  return out;
}

ImageTensor salt_pepper(const ImageTensor& img, double severity, Rng rng) {
  ImageTensor out = img;
  const size_t n = img.pixel_count();
  const auto flip = static_cast<size_t>(std::floor(severity * static_cast<double>(n)));
  if (flip == 0) return out;
  // partial Fisher-Yates draws `flip` distinct pixels; the salt/pepper coin
  // is flipped immediately after each selection
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  for (size_t i = 0; i < flip; ++i) {
    const size_t j = i + rng.bounded(n - i);
    std::swap(idx[i], idx[j]);
    const double v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    for (int c = 0; c < 3; ++c) out.data[idx[i] * 3 + c] = v;
  }
  return out;
}

ImageTensor shift_clamp(const ImageTensor& img, double shift) {
  ImageTensor out = img;
  kernels::active().add_scalar_clamp01(img.data.data(), img.data.size(), shift,
                                       out.data.data());
  return out;
}

}  // namespace

ImageTensor apply_perturbation(const ImageTensor& img, const PerturbSpec& spec) {
  if (!(spec.severity >= 0.0 && spec.severity <= 1.0))
    throw ConfigError("severity outside [0,1]");
  validate(img);
  switch (spec.kind) {
    case PerturbKind::gaussian_noise:
      return gaussian_noise(img, spec.severity, spec_rng(spec));
    case PerturbKind::blur:
      return box_blur(img, static_cast<int>(std::llround(spec.severity * 5.0)));
    case PerturbKind::occlusion:
      return occlusion(img, spec.severity, spec_rng(spec));
    case PerturbKind::salt_pepper:
      return salt_pepper(img, spec.severity, spec_rng(spec));
    case PerturbKind::brightness:
      return shift_clamp(img, spec.severity);
    case PerturbKind::darkness:
      return shift_clamp(img, -spec.severity);
  }
  throw ConfigError("unreachable perturbation kind");
}

std::vector<ImageTensor> severity_sweep(const ImageTensor& img, PerturbKind kind,
                                        const std::vector<double>& severities,
                                        uint64_t base_seed) {
  if (severities.empty()) throw ConfigError("severity list must not be empty");
  std::vector<ImageTensor> out;
  out.reserve(severities.size());
  for (size_t i = 0; i < severities.size(); ++i) {
    PerturbSpec spec;
    spec.kind = kind;
    spec.severity = severities[i];
    spec.seed = Rng::substream_seed(base_seed, i);
    out.push_back(apply_perturbation(img, spec));
  }
  return out;
}

}  // namespace fairseg
