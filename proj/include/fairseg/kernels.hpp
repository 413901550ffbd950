#pragma once

#include <cstdint>
#include <string>

namespace fairseg::kernels {

// The arithmetic inner loops live behind this table. Two backends exist:
// a scalar reference and an AVX2 variant. Both produce bit-identical
// results: SIMD lanes map to independent output elements with the exact
// per-element operation order of the scalar code, reductions accumulate in
// four fixed stripes combined as (s0+s1)+(s2+s3) in both backends, and no
// FMA contraction is permitted. Equivalence is asserted by tests/test_kernels.
enum class Backend { scalar, avx2 };

struct Table {
  // 3x3 convolution, zero padding of one pixel (out-of-bounds taps are
  // skipped). Layouts: in[cin][h*w] plane-major, weights[cout][cin][3][3]
  // flat, out[cout][h*w]. Per output element the accumulation order is
  // bias, then (ic, ky, kx) row-major.
  void (*conv3x3_forward)(const double* in, int cin, int h, int w,
                          const double* weights, const double* bias, int cout,
                          double* out);

  // Gradients of the 3x3 convolution w.r.t. weights and bias given the
  // gradient dz[cout][h*w] at its output. wgrad has the weight layout,
  // bgrad[cout]. Striped reduction, rows combined in y order.
  void (*conv3x3_param_grads)(const double* in, int cin, int h, int w,
                              const double* dz, int cout, double* wgrad,
                              double* bgrad);

  // 1x1 convolution over n pixels: out[co][p] = bias[co] + sum_ci w[co][ci]*in[ci][p].
  void (*conv1x1_forward)(const double* in, int cin, int n,
                          const double* weights, const double* bias, int cout,
                          double* out);

  // din[ci][p] = sum_co up[co][p] * w[co][ci].
  void (*conv1x1_backward_data)(const double* up, int cout, int n,
                                const double* weights, int cin, double* din);

  // wgrad[co][ci] = sum_p up[co][p] * in[ci][p]; bgrad[co] = sum_p up[co][p].
  void (*conv1x1_param_grads)(const double* up, int cout, int n,
                              const double* in, int cin, double* wgrad,
                              double* bgrad);

  void (*relu_forward)(const double* in, size_t n, double* out);

  // down[i] = pre[i] > 0 ? up[i] : 0 (subgradient at 0 is 0).
  void (*relu_backward)(const double* pre, const double* up, size_t n,
                        double* down);

  // Numerically stabilized softmax across c channels of n pixels,
  // plane-major in/out.
  void (*softmax_planes)(const double* logits, int c, size_t n, double* probs);

  // Vector-Jacobian product of softmax: given probs and an upstream
  // gradient w.r.t. probs, emits the gradient w.r.t. logits:
  // dz[c][p] = probs[c][p] * (up[c][p] - sum_k up[k][p]*probs[k][p]).
  void (*softmax_vjp)(const double* probs, const double* up, int c, size_t n,
                      double* dz);

  // One Adam update over n coordinates. bc1 = 1/(1-beta1^t) and
  // bc2 = 1/(1-beta2^t) are precomputed by the caller.
  void (*adam_update)(double* param, double* m, double* v, const double* grad,
                      size_t n, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2);

  // out[i] = clamp(in[i] + shift, 0, 1).
  void (*add_scalar_clamp01)(const double* in, size_t n, double shift,
                             double* out);

  // Mean over the (2r+1)^2 window with edge-clamped coordinates, one
  // channel plane. Window taps accumulate in (dy, dx) row-major order and
  // divide once by the full window size.
  void (*box_blur_plane)(const double* in, int h, int w, int radius,
                         double* out);
};

// Active backend. Detection runs once at first use: AVX2 when the CPU and
// build support it, scalar otherwise. The FAIRSEG_KERNELS environment
// variable ("scalar" or "avx2") overrides detection.
const Table& active();
Backend active_backend();
void set_backend(Backend b);
bool avx2_available();
std::string backend_name(Backend b);

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in or unsupported

}  // namespace fairseg::kernels
