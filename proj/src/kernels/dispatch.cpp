#include <atomic>

#include "burgers/error.hpp"
#include "burgers/kernels.hpp"

namespace burgers::kernels {
namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*xpby)(const double*, double, double*, std::size_t);
  void (*multiply)(const double*, const double*, double*, std::size_t);
  void (*csr_spmv)(const CsrView&, const double*, double*);
};

constexpr Table kScalar{scalar::dot, scalar::axpy, scalar::xpby, scalar::multiply, scalar::csr_spmv};
#if defined(BURGERS_HAVE_AVX2)
constexpr Table kAvx2{avx2::dot, avx2::axpy, avx2::xpby, avx2::multiply, avx2::csr_spmv};
#endif
#if defined(BURGERS_HAVE_NEON)
constexpr Table kNeon{neon::dot, neon::axpy, neon::xpby, neon::multiply, neon::csr_spmv};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
#if defined(BURGERS_HAVE_AVX2)
    case Isa::Avx2:
      return &kAvx2;
#endif
#if defined(BURGERS_HAVE_NEON)
    case Isa::Neon:
      return &kNeon;
#endif
    default:
      return &kScalar;
  }
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

const Table& current() { return *table_for(active().load(std::memory_order_relaxed)); }

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch("vector lengths differ");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
    default:
      return "scalar";
  }
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(BURGERS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(BURGERS_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return active().load(); }

bool set_active_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  active().store(isa);
  return true;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same(x.size(), y.size());
  return current().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_same(x.size(), y.size());
  current().axpy(a, x.data(), y.data(), x.size());
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  require_same(x.size(), y.size());
  current().xpby(x.data(), b, y.data(), x.size());
}

void multiply(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  require_same(x.size(), y.size());
  require_same(x.size(), z.size());
  current().multiply(x.data(), y.data(), z.data(), x.size());
}

void csr_spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  require_same(a.row_offsets.size(), a.rows + 1);
  require_same(y.size(), a.rows);
  current().csr_spmv(a, x.data(), y.data());
}

}  // namespace burgers::kernels
