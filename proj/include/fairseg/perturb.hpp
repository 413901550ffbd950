#pragma once

// Input corruption suite for robustness evaluation. Severity in [0, 1] maps
// to: noise sigma = severity, blur radius = round(5*severity), occluded
// area fraction = severity, flipped pixel fraction = severity, additive
// brightness/darkness shift = severity.

#include <cstdint>
#include <string>
#include <vector>

#include "fairseg/tensor.hpp"

namespace fairseg {

enum class PerturbKind {
  gaussian_noise,
  blur,
  occlusion,
  salt_pepper,
  brightness,
  darkness,
};

PerturbKind parse_perturb_kind(const std::string& token);
std::string to_string(PerturbKind kind);
const std::vector<PerturbKind>& all_perturb_kinds();

struct PerturbSpec {
  PerturbKind kind = PerturbKind::gaussian_noise;
  double severity = 0.0;
  uint64_t seed = 0;  // used by the stochastic kinds
};

// Pure: the input is never mutated, output dimensions equal input
// dimensions, output values stay in [0, 1]. Deterministic given spec.seed.
ImageTensor apply_perturbation(const ImageTensor& img, const PerturbSpec& spec);

// One output per severity; element i uses a seed derived from
// (base_seed, i), so a sweep is reproducible element by element.
std::vector<ImageTensor> severity_sweep(const ImageTensor& img, PerturbKind kind,
                                        const std::vector<double>& severities,
                                        uint64_t base_seed);

}  // namespace fairseg
