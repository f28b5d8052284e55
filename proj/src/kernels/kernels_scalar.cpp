#include "burgers/kernels.hpp"

namespace burgers::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) s[l] += x[i + l] * y[i + l];
  }
  for (int l = 0; i < n; ++i, ++l) s[l] += x[i] * y[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void multiply(const double* x, const double* y, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void csr_spmv(const CsrView& a, const double* x, double* y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      acc += a.values[k] * x[a.column_indices[k]];
    }
    y[r] = acc;
  }
}

}  // namespace burgers::kernels::scalar
