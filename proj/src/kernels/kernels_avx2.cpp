#include <immintrin.h>

#include <algorithm>

#include "burgers/kernels.hpp"

namespace burgers::kernels::avx2 {

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (int l = 0; i < n; ++i, ++l) s[l] += x[i] * y[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vb, vy)));
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void multiply(const double* x, const double* y, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

// Four rows per pass, one row per lane; each lane walks its row in storage
// order so the per-row sum matches the scalar kernel exactly.
void csr_spmv(const CsrView& a, const double* x, double* y) {
  const int* off = a.row_offsets.data();
  const int* col = a.column_indices.data();
  const double* val = a.values.data();
  std::size_t r = 0;
  for (; r + 4 <= a.rows; r += 4) {
    const __m128i start = _mm_loadu_si128(reinterpret_cast<const __m128i*>(off + r));
    const __m128i stop = _mm_loadu_si128(reinterpret_cast<const __m128i*>(off + r + 1));
    const __m128i len = _mm_sub_epi32(stop, start);
    int lens[4];
    _mm_storeu_si128(reinterpret_cast<__m128i*>(lens), len);
    const int max_len = std::max(std::max(lens[0], lens[1]), std::max(lens[2], lens[3]));
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k < max_len; ++k) {
      const __m128i kk = _mm_set1_epi32(k);
      const __m128i active32 = _mm_cmpgt_epi32(len, kk);
      const __m256d active = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(active32));
      // Inactive lanes read entry 0, which always exists when max_len > 0.
      const __m128i pos = _mm_and_si128(_mm_add_epi32(start, kk), active32);
      const __m256d v = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), val, pos, active, 8);
      const __m128i c = _mm_mask_i32gather_epi32(_mm_setzero_si128(), col, pos, active32, 4);
      const __m256d xv = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), x, c, active, 8);
      acc = _mm256_blendv_pd(acc, _mm256_add_pd(acc, _mm256_mul_pd(v, xv)), active);
    }
    _mm256_storeu_pd(y + r, acc);
  }
  for (; r < a.rows; ++r) {
    double acc = 0.0;
    for (int k = off[r]; k < off[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

}  // namespace burgers::kernels::avx2
