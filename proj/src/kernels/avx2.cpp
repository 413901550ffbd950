// AVX2 backend. Lanes map to four consecutive output elements; every lane
// performs the scalar reference operation sequence, edge pixels and loop
// tails call the shared per-element helpers, and reductions keep the same
// four-stripe accumulation as the scalar backend. Results are bit-identical
// to scalar.cpp. Compiled with -mavx2 and without FMA.

#include <cstddef>

#include "fairseg/kernels.hpp"
#include "kernels_detail.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace fairseg::kernels {
namespace {

using namespace detail;

void conv3x3_forward_avx2(const double* in, int cin, int h, int w,
                          const double* weights, const double* bias, int cout,
                          double* out) {
  const size_t plane = static_cast<size_t>(h) * w;
  for (int oc = 0; oc < cout; ++oc) {
    const double* wts = weights + static_cast<size_t>(oc) * cin * 9;
    double* op = out + static_cast<size_t>(oc) * plane;
    for (int y = 0; y < h; ++y) {
      double* orow = op + static_cast<size_t>(y) * w;
      int x = 0;
      if (w >= 2) {
        orow[0] = conv3x3_at(in, cin, h, w, wts, bias[oc], y, 0);
        x = 1;
        // interior: the 3x3 window never crosses a vertical edge
        for (; x + 4 <= w - 1; x += 4) {
          __m256d acc = _mm256_set1_pd(bias[oc]);
          for (int ic = 0; ic < cin; ++ic) {
            const double* ip = in + static_cast<size_t>(ic) * plane;
            const double* wp = wts + static_cast<size_t>(ic) * 9;
            for (int ky = 0; ky < 3; ++ky) {
              const int iy = y + ky - 1;
              if (iy < 0 || iy >= h) continue;
              const double* irow = ip + static_cast<size_t>(iy) * w;
              for (int kx = 0; kx < 3; ++kx) {
                const __m256d wv = _mm256_set1_pd(wp[ky * 3 + kx]);
                const __m256d iv = _mm256_loadu_pd(irow + x + kx - 1);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, iv));
              }
            }
          }
          _mm256_storeu_pd(orow + x, acc);
        }
      }
      for (; x < w; ++x) orow[x] = conv3x3_at(in, cin, h, w, wts, bias[oc], y, x);
    }
  }
}

double wgrad_reduce_avx2(const double* dz_plane, const double* in_plane, int h,
                         int w, int ky, int kx) {
  const int dy = ky - 1;
  const int dx = kx - 1;
  const int y0 = dy < 0 ? 1 : 0;
  const int y1 = dy > 0 ? h - 2 : h - 1;
  const int x0 = dx < 0 ? 1 : 0;
  const int x1 = dx > 0 ? w - 2 : w - 1;
  double total = 0.0;
  for (int y = y0; y <= y1; ++y) {
    const double* dzr = dz_plane + static_cast<size_t>(y) * w + x0;
    const double* inr = in_plane + static_cast<size_t>(y + dy) * w + dx + x0;
    const int len = x1 - x0 + 1;
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= len; i += 4)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(dzr + i), _mm256_loadu_pd(inr + i)));
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    for (; i < len; ++i) s[i & 3] += dzr[i] * inr[i];
    total += hsum4(s);
  }
  return total;
}

double striped_sum_avx2(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (; i < n; ++i) s[i & 3] += a[i];
  return hsum4(s);
}

double striped_dot_avx2(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (; i < n; ++i) s[i & 3] += a[i] * b[i];
  return hsum4(s);
}

void conv3x3_param_grads_avx2(const double* in, int cin, int h, int w,
                              const double* dz, int cout, double* wgrad,
                              double* bgrad) {
  const size_t plane = static_cast<size_t>(h) * w;
  for (int oc = 0; oc < cout; ++oc) {
    const double* dzp = dz + static_cast<size_t>(oc) * plane;
    bgrad[oc] = striped_sum_avx2(dzp, plane);
    for (int ic = 0; ic < cin; ++ic) {
      const double* inp = in + static_cast<size_t>(ic) * plane;
      double* wg = wgrad + (static_cast<size_t>(oc) * cin + ic) * 9;
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx)
          wg[ky * 3 + kx] = wgrad_reduce_avx2(dzp, inp, h, w, ky, kx);
    }
  }
}

void conv1x1_forward_avx2(const double* in, int cin, int n,
                          const double* weights, const double* bias, int cout,
                          double* out) {
  const auto un = static_cast<size_t>(n);
  for (int co = 0; co < cout; ++co) {
    const double* w_row = weights + static_cast<size_t>(co) * cin;
    double* op = out + static_cast<size_t>(co) * un;
    size_t p = 0;
    for (; p + 4 <= un; p += 4) {
      __m256d acc = _mm256_set1_pd(bias[co]);
      for (int ci = 0; ci < cin; ++ci)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w_row[ci]),
                                               _mm256_loadu_pd(in + static_cast<size_t>(ci) * un + p)));
      _mm256_storeu_pd(op + p, acc);
    }
    for (; p < un; ++p) op[p] = conv1x1_at(in, cin, un, w_row, bias[co], p);
  }
}

void conv1x1_backward_data_avx2(const double* up, int cout, int n,
                                const double* weights, int cin, double* din) {
  const auto un = static_cast<size_t>(n);
  for (int ci = 0; ci < cin; ++ci) {
    double* dp = din + static_cast<size_t>(ci) * un;
    size_t p = 0;
    for (; p + 4 <= un; p += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int co = 0; co < cout; ++co)
        acc = _mm256_add_pd(acc,
                            _mm256_mul_pd(_mm256_loadu_pd(up + static_cast<size_t>(co) * un + p),
                                          _mm256_set1_pd(weights[static_cast<size_t>(co) * cin + ci])));
      _mm256_storeu_pd(dp + p, acc);
    }
    for (; p < un; ++p) dp[p] = conv1x1_bwd_at(up, cout, un, weights, cin, ci, p);
  }
}

void conv1x1_param_grads_avx2(const double* up, int cout, int n,
                              const double* in, int cin, double* wgrad,
                              double* bgrad) {
  const auto un = static_cast<size_t>(n);
  for (int co = 0; co < cout; ++co) {
    const double* upp = up + static_cast<size_t>(co) * un;
    bgrad[co] = striped_sum_avx2(upp, un);
    for (int ci = 0; ci < cin; ++ci)
      wgrad[static_cast<size_t>(co) * cin + ci] =
          striped_dot_avx2(upp, in + static_cast<size_t>(ci) * un, un);
  }
}

void relu_forward_avx2(const double* in, size_t n, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(in + i), zero));
  for (; i < n; ++i) out[i] = relu_at(in[i]);
}

void relu_backward_avx2(const double* pre, const double* up, size_t n,
                        double* down) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(down + i, _mm256_and_pd(mask, _mm256_loadu_pd(up + i)));
  }
  for (; i < n; ++i) down[i] = relu_bwd_at(pre[i], up[i]);
}

void softmax_planes_avx2(const double* logits, int c, size_t n, double* probs) {
  size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    __m256d m = _mm256_loadu_pd(logits + p);
    for (int k = 1; k < c; ++k)
      m = _mm256_max_pd(m, _mm256_loadu_pd(logits + static_cast<size_t>(k) * n + p));
    alignas(32) double mbuf[4];
    _mm256_store_pd(mbuf, m);
    __m256d sum = _mm256_setzero_pd();
    for (int k = 0; k < c; ++k) {
      alignas(32) double ebuf[4];
      const double* zrow = logits + static_cast<size_t>(k) * n + p;
      for (int j = 0; j < 4; ++j) ebuf[j] = std::exp(zrow[j] - mbuf[j]);
      const __m256d e = _mm256_load_pd(ebuf);
      _mm256_storeu_pd(probs + static_cast<size_t>(k) * n + p, e);
      sum = _mm256_add_pd(sum, e);
    }
    for (int k = 0; k < c; ++k) {
      double* prow = probs + static_cast<size_t>(k) * n + p;
      _mm256_storeu_pd(prow, _mm256_div_pd(_mm256_loadu_pd(prow), sum));
    }
  }
  for (; p < n; ++p) softmax_at(logits, c, n, p, probs);
}

void softmax_vjp_avx2(const double* probs, const double* up, int c, size_t n,
                      double* dz) {
  size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    __m256d dot = _mm256_setzero_pd();
    for (int k = 0; k < c; ++k)
      dot = _mm256_add_pd(dot,
                          _mm256_mul_pd(_mm256_loadu_pd(up + static_cast<size_t>(k) * n + p),
                                        _mm256_loadu_pd(probs + static_cast<size_t>(k) * n + p)));
    for (int k = 0; k < c; ++k) {
      const size_t i = static_cast<size_t>(k) * n + p;
      const __m256d pv = _mm256_loadu_pd(probs + i);
      const __m256d uv = _mm256_loadu_pd(up + i);
      _mm256_storeu_pd(dz + i, _mm256_mul_pd(pv, _mm256_sub_pd(uv, dot)));
    }
  }
  for (; p < n; ++p) softmax_vjp_at(probs, up, c, n, p, dz);
}

void adam_update_avx2(double* param, double* m, double* v, const double* grad,
                      size_t n, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2) {
  const double omb1 = 1.0 - beta1;
  const double omb2 = 1.0 - beta2;
  const __m256d vb1 = _mm256_set1_pd(beta1), vomb1 = _mm256_set1_pd(omb1);
  const __m256d vb2 = _mm256_set1_pd(beta2), vomb2 = _mm256_set1_pd(omb2);
  const __m256d vlr = _mm256_set1_pd(lr), veps = _mm256_set1_pd(eps);
  const __m256d vbc1 = _mm256_set1_pd(bc1), vbc2 = _mm256_set1_pd(bc2);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)),
                                     _mm256_mul_pd(vomb1, g));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(vomb2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d mhat = _mm256_mul_pd(mi, vbc1);
    const __m256d vhat = _mm256_mul_pd(vi, vbc2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat),
                                       _mm256_add_pd(_mm256_sqrt_pd(vhat), veps));
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  for (; i < n; ++i)
    adam_at(param, m, v, grad, i, lr, omb1, omb2, beta1, beta2, eps, bc1, bc2);
}

void add_scalar_clamp01_avx2(const double* in, size_t n, double shift,
                             double* out) {
  const __m256d vs = _mm256_set1_pd(shift);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_loadu_pd(in + i), vs);
    t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
    _mm256_storeu_pd(out + i, t);
  }
  for (; i < n; ++i) out[i] = add_clamp01_at(in[i], shift);
}

void box_blur_plane_avx2(const double* in, int h, int w, int radius,
                         double* out) {
  const int r = radius;
  const int k = 2 * r + 1;
  const __m256d kk = _mm256_set1_pd(static_cast<double>(k * k));
  for (int y = 0; y < h; ++y) {
    double* orow = out + static_cast<size_t>(y) * w;
    int x = 0;
    for (; x < w && x < r; ++x) orow[x] = box_blur_at(in, h, w, r, y, x);
    // interior: all window columns in bounds for the whole lane block
    for (; x + 4 <= w - r; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        const double* irow = in + static_cast<size_t>(yy) * w;
        for (int dx = -r; dx <= r; ++dx)
          acc = _mm256_add_pd(acc, _mm256_loadu_pd(irow + x + dx));
      }
      // must divide (not multiply by reciprocal) to match the scalar path
      _mm256_storeu_pd(orow + x, _mm256_div_pd(acc, kk));
    }
    for (; x < w; ++x) orow[x] = box_blur_at(in, h, w, r, y, x);
  }
}

}  // namespace

const Table* avx2_table() {
  static const Table t{
      conv3x3_forward_avx2,   conv3x3_param_grads_avx2,
      conv1x1_forward_avx2,   conv1x1_backward_data_avx2,
      conv1x1_param_grads_avx2, relu_forward_avx2,
      relu_backward_avx2,     softmax_planes_avx2,
      softmax_vjp_avx2,       adam_update_avx2,
      add_scalar_clamp01_avx2, box_blur_plane_avx2,
  };
  return &t;
}

}  // namespace fairseg::kernels

#else  // !defined(__AVX2__)

namespace fairseg::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace fairseg::kernels

#endif
