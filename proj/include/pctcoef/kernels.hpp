#pragma once
// Data-parallel inner loops used by the regression and resampling code.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) are compiled when the target supports them and
// picked at runtime. Variants agree with the reference up to floating-point
// reassociation; gather is exact.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pctcoef::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double center);
  void (*gather)(const double* src, const std::uint32_t* idx, double* dst, std::size_t n);
};

/// Table for a specific backend, or nullptr if it was not built or the CPU
/// lacks the instructions.
const KernelTable* find_table(Backend backend) noexcept;

/// Backends this binary was built with and the running CPU supports.
std::vector<Backend> available_backends();

/// Table used by the free functions below. Chosen on first use from the
/// PCTCOEF_KERNELS environment variable (scalar|avx2|neon|auto), falling back
/// to the widest supported backend.
const KernelTable& active() noexcept;

/// Forces a backend. Returns false (and changes nothing) if unavailable.
/// Not thread-safe with respect to concurrent kernel calls.
bool select_backend(Backend backend) noexcept;

std::string_view name(Backend backend) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

/// Sum of (x_i - center)^2.
inline double sum_sq_dev(std::span<const double> x, double center) {
  return active().sum_sq_dev(x.data(), x.size(), center);
}

/// dst[i] = src[idx[i]]
inline void gather(std::span<const double> src, std::span<const std::uint32_t> idx,
                   std::span<double> dst) {
  active().gather(src.data(), idx.data(), dst.data(), idx.size());
}

}  // namespace pctcoef::kernels
