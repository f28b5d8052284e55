#include <arm_neon.h>

#include "burgers/kernels.hpp"

namespace burgers::kernels::neon {

double dot(const double* x, const double* y, std::size_t n) {
  // Two 2-lane accumulators hold the four strided partial sums.
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double s[4];
  vst1q_f64(s, lo);
  vst1q_f64(s + 2, hi);
  for (int l = 0; i < n; ++i, ++l) s[l] += x[i] * y[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(vb, vld1q_f64(y + i))));
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void multiply(const double* x, const double* y, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(z + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

// No gather on NEON; rows stay scalar.
void csr_spmv(const CsrView& a, const double* x, double* y) {
  const int* off = a.row_offsets.data();
  const int* col = a.column_indices.data();
  const double* val = a.values.data();
  for (std::size_t r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int k = off[r]; k < off[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

}  // namespace burgers::kernels::neon
