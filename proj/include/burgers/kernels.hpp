#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops of the linear algebra layer. Every ISA variant
// reproduces the scalar reference bit for bit: reductions use four strided
// partial sums combined as (s0 + s1) + (s2 + s3), sparse rows accumulate in
// storage order, and no variant contracts multiply/add into FMA.
namespace burgers::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Best variant supported by this CPU and build.
Isa detected_isa();
/// Variant currently used by the dispatching entry points.
Isa active_isa();
/// Overrides dispatch; returns false when the variant is unavailable here.
bool set_active_isa(Isa isa);
bool isa_available(Isa isa);

/// Read-only CSR view. Column indices and offsets are 32-bit.
struct CsrView {
  std::size_t rows = 0;
  std::span<const int> row_offsets;
  std::span<const int> column_indices;
  std::span<const double> values;
};

double dot(std::span<const double> x, std::span<const double> y);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + b * y
void xpby(std::span<const double> x, double b, std::span<double> y);
/// z = x .* y
void multiply(std::span<const double> x, std::span<const double> y, std::span<double> z);
/// y = A x
void csr_spmv(const CsrView& a, std::span<const double> x, std::span<double> y);

// Per-ISA entry points, exposed for equivalence testing.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void multiply(const double* x, const double* y, double* z, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace scalar

#if defined(BURGERS_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void multiply(const double* x, const double* y, double* z, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace avx2
#endif

#if defined(BURGERS_HAVE_NEON)
namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void multiply(const double* x, const double* y, double* z, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace neon
#endif

}  // namespace burgers::kernels
