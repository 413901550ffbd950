// Scalar reference backend. This file defines the numeric semantics of every
// kernel; the AVX2 backend reproduces these results bit-for-bit.

#include <cstddef>

#include "fairseg/kernels.hpp"
#include "kernels_detail.hpp"

namespace fairseg::kernels {
namespace {

using namespace detail;

void conv3x3_forward_scalar(const double* in, int cin, int h, int w,
                            const double* weights, const double* bias,
                            int cout, double* out) {
  const size_t plane = static_cast<size_t>(h) * w;
  for (int oc = 0; oc < cout; ++oc) {
    const double* wts = weights + static_cast<size_t>(oc) * cin * 9;
    double* op = out + static_cast<size_t>(oc) * plane;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        op[static_cast<size_t>(y) * w + x] = conv3x3_at(in, cin, h, w, wts, bias[oc], y, x);
  }
}

// Reduction over the image for one (oc, ic, ky, kx) weight. Each row is
// accumulated into four stripes keyed by (x - x0) & 3 and combined with
// hsum4 before moving to the next row.
double wgrad_reduce(const double* dz_plane, const double* in_plane, int h,
                    int w, int ky, int kx) {
  const int dy = ky - 1;
  const int dx = kx - 1;
  const int y0 = dy < 0 ? 1 : 0;
  const int y1 = dy > 0 ? h - 2 : h - 1;
  const int x0 = dx < 0 ? 1 : 0;
  const int x1 = dx > 0 ? w - 2 : w - 1;
  double total = 0.0;
  for (int y = y0; y <= y1; ++y) {
    const double* dzr = dz_plane + static_cast<size_t>(y) * w;
    const double* inr = in_plane + static_cast<size_t>(y + dy) * w + dx;
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    const int len = x1 - x0 + 1;
    for (int i = 0; i < len; ++i) s[i & 3] += dzr[x0 + i] * inr[x0 + i];
    total += hsum4(s);
  }
  return total;
}

// Contiguous striped sum of n elements.
double striped_sum(const double* a, size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (size_t i = 0; i < n; ++i) s[i & 3] += a[i];
  return hsum4(s);
}

// Contiguous striped dot product.
double striped_dot(const double* a, const double* b, size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (size_t i = 0; i < n; ++i) s[i & 3] += a[i] * b[i];
  return hsum4(s);
}

void conv3x3_param_grads_scalar(const double* in, int cin, int h, int w,
                                const double* dz, int cout, double* wgrad,
                                double* bgrad) {
  const size_t plane = static_cast<size_t>(h) * w;
  for (int oc = 0; oc < cout; ++oc) {
    const double* dzp = dz + static_cast<size_t>(oc) * plane;
    bgrad[oc] = striped_sum(dzp, plane);
    for (int ic = 0; ic < cin; ++ic) {
      const double* inp = in + static_cast<size_t>(ic) * plane;
      double* wg = wgrad + (static_cast<size_t>(oc) * cin + ic) * 9;
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx)
          wg[ky * 3 + kx] = wgrad_reduce(dzp, inp, h, w, ky, kx);
    }
  }
}

void conv1x1_forward_scalar(const double* in, int cin, int n,
                            const double* weights, const double* bias,
                            int cout, double* out) {
  const auto un = static_cast<size_t>(n);
  for (int co = 0; co < cout; ++co) {
    const double* w_row = weights + static_cast<size_t>(co) * cin;
    double* op = out + static_cast<size_t>(co) * un;
    for (size_t p = 0; p < un; ++p) op[p] = conv1x1_at(in, cin, un, w_row, bias[co], p);
  }
}

void conv1x1_backward_data_scalar(const double* up, int cout, int n,
                                  const double* weights, int cin,
                                  double* din) {
  const auto un = static_cast<size_t>(n);
  for (int ci = 0; ci < cin; ++ci) {
    double* dp = din + static_cast<size_t>(ci) * un;
    for (size_t p = 0; p < un; ++p) dp[p] = conv1x1_bwd_at(up, cout, un, weights, cin, ci, p);
  }
}

void conv1x1_param_grads_scalar(const double* up, int cout, int n,
                                const double* in, int cin, double* wgrad,
                                double* bgrad) {
  const auto un = static_cast<size_t>(n);
  for (int co = 0; co < cout; ++co) {
    const double* upp = up + static_cast<size_t>(co) * un;
    bgrad[co] = striped_sum(upp, un);
    for (int ci = 0; ci < cin; ++ci)
      wgrad[static_cast<size_t>(co) * cin + ci] =
          striped_dot(upp, in + static_cast<size_t>(ci) * un, un);
  }
}

void relu_forward_scalar(const double* in, size_t n, double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = relu_at(in[i]);
}

void relu_backward_scalar(const double* pre, const double* up, size_t n,
                          double* down) {
  for (size_t i = 0; i < n; ++i) down[i] = relu_bwd_at(pre[i], up[i]);
}

void softmax_planes_scalar(const double* logits, int c, size_t n,
                           double* probs) {
  for (size_t p = 0; p < n; ++p) softmax_at(logits, c, n, p, probs);
}

void softmax_vjp_scalar(const double* probs, const double* up, int c, size_t n,
                        double* dz) {
  for (size_t p = 0; p < n; ++p) softmax_vjp_at(probs, up, c, n, p, dz);
}

void adam_update_scalar(double* param, double* m, double* v,
                        const double* grad, size_t n, double lr, double beta1,
                        double beta2, double eps, double bc1, double bc2) {
  const double omb1 = 1.0 - beta1;
  const double omb2 = 1.0 - beta2;
  for (size_t i = 0; i < n; ++i)
    adam_at(param, m, v, grad, i, lr, omb1, omb2, beta1, beta2, eps, bc1, bc2);
}

void add_scalar_clamp01_scalar(const double* in, size_t n, double shift,
                               double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = add_clamp01_at(in[i], shift);
}

void box_blur_plane_scalar(const double* in, int h, int w, int radius,
                           double* out) {
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[static_cast<size_t>(y) * w + x] = box_blur_at(in, h, w, radius, y, x);
}

}  // namespace

const Table& scalar_table() {
  static const Table t{
      conv3x3_forward_scalar,   conv3x3_param_grads_scalar,
      conv1x1_forward_scalar,   conv1x1_backward_data_scalar,
      conv1x1_param_grads_scalar, relu_forward_scalar,
      relu_backward_scalar,     softmax_planes_scalar,
      softmax_vjp_scalar,       adam_update_scalar,
      add_scalar_clamp01_scalar, box_blur_plane_scalar,
  };
  return t;
}

}  // namespace fairseg::kernels
