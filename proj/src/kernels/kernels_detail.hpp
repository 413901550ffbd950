#pragma once

// Per-element reference arithmetic shared by both kernel backends. The AVX2
// backend calls these for edge pixels and loop tails, so every element goes
// through exactly one operation sequence no matter which backend ran.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace fairseg::kernels::detail {

// Combine the four reduction stripes. Fixed pairwise order; both backends
// must use this exact combine.
inline double hsum4(const double s[4]) { return (s[0] + s[1]) + (s[2] + s[3]); }

// One output element of the padded 3x3 convolution. `wts` points at the
// [cin][3][3] block of a single output channel. Out-of-bounds taps are
// skipped, which equals zero padding.
inline double conv3x3_at(const double* in, int cin, int h, int w,
                         const double* wts, double bias, int y, int x) {
  const size_t plane = static_cast<size_t>(h) * w;
  double acc = bias;
  for (int ic = 0; ic < cin; ++ic) {
    const double* ip = in + ic * plane;
    const double* wp = wts + ic * 9;
    for (int ky = 0; ky < 3; ++ky) {
      const int iy = y + ky - 1;
      if (iy < 0 || iy >= h) continue;
      const double* row = ip + static_cast<size_t>(iy) * w;
      for (int kx = 0; kx < 3; ++kx) {
        const int ix = x + kx - 1;
        if (ix < 0 || ix >= w) continue;
        acc += wp[ky * 3 + kx] * row[ix];
      }
    }
  }
  return acc;
}

inline double conv1x1_at(const double* in, int cin, size_t n,
                         const double* w_row, double bias, size_t p) {
  double acc = bias;
  for (int ci = 0; ci < cin; ++ci) acc += w_row[ci] * in[static_cast<size_t>(ci) * n + p];
  return acc;
}

inline double conv1x1_bwd_at(const double* up, int cout, size_t n,
                             const double* weights, int cin, int ci, size_t p) {
  double acc = 0.0;
  for (int co = 0; co < cout; ++co)
    acc += up[static_cast<size_t>(co) * n + p] * weights[static_cast<size_t>(co) * cin + ci];
  return acc;
}

inline void softmax_at(const double* z, int c, size_t n, size_t p, double* out) {
  double m = z[p];
  for (int k = 1; k < c; ++k) {
    const double v = z[static_cast<size_t>(k) * n + p];
    if (v > m) m = v;
  }
  double sum = 0.0;
  for (int k = 0; k < c; ++k) {
    const double e = std::exp(z[static_cast<size_t>(k) * n + p] - m);
    out[static_cast<size_t>(k) * n + p] = e;
    sum += e;
  }
  for (int k = 0; k < c; ++k) out[static_cast<size_t>(k) * n + p] /= sum;
}

inline void softmax_vjp_at(const double* probs, const double* up, int c,
                           size_t n, size_t p, double* dz) {
  double dot = 0.0;
  for (int k = 0; k < c; ++k)
    dot += up[static_cast<size_t>(k) * n + p] * probs[static_cast<size_t>(k) * n + p];
  for (int k = 0; k < c; ++k) {
    const size_t i = static_cast<size_t>(k) * n + p;
    dz[i] = probs[i] * (up[i] - dot);
  }
}

inline void adam_at(double* param, double* m, double* v, const double* grad,
                    size_t i, double lr, double one_minus_b1,
                    double one_minus_b2, double beta1, double beta2, double eps,
                    double bc1, double bc2) {
  const double g = grad[i];
  m[i] = beta1 * m[i] + one_minus_b1 * g;
  v[i] = beta2 * v[i] + one_minus_b2 * (g * g);
  const double mhat = m[i] * bc1;
  const double vhat = v[i] * bc2;
  param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
}

inline double relu_at(double x) { return x > 0.0 ? x : 0.0; }

inline double relu_bwd_at(double pre, double up) { return pre > 0.0 ? up : 0.0; }

inline double add_clamp01_at(double x, double shift) {
  double t = x + shift;
  t = t < 0.0 ? 0.0 : t;
  t = t > 1.0 ? 1.0 : t;
  return t;
}

inline double box_blur_at(const double* in, int h, int w, int r, int y, int x) {
  double acc = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    const int yy = std::clamp(y + dy, 0, h - 1);
    const double* row = in + static_cast<size_t>(yy) * w;
    for (int dx = -r; dx <= r; ++dx) {
      const int xx = std::clamp(x + dx, 0, w - 1);
      acc += row[xx];
    }
  }
  const int k = 2 * r + 1;
  return acc / static_cast<double>(k * k);
}

}  // namespace fairseg::kernels::detail
