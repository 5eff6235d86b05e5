#include <atomic>
#include <cstdlib>
#include <string_view>

#include "tables.hpp"

namespace pctcoef::kernels {
namespace {

bool cpu_supports(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(PCTCOEF_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(PCTCOEF_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Backend backend) noexcept {
  switch (backend) {
#if defined(PCTCOEF_HAVE_AVX2)
    case Backend::avx2: return avx2_table();
#endif
#if defined(PCTCOEF_HAVE_NEON)
    case Backend::neon: return neon_table();
#endif
    default: return scalar_table();
  }
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("PCTCOEF_KERNELS")) {
    const std::string_view want{env};
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
      if (want == name(b) && cpu_supports(b)) return &table_for(b);
  }
  for (Backend b : {Backend::avx2, Backend::neon})
    if (cpu_supports(b)) return &table_for(b);
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (cpu_supports(b)) out.push_back(b);
  return out;
}

const KernelTable* find_table(Backend backend) noexcept {
  if (!cpu_supports(backend)) return nullptr;
  return &table_for(backend);
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select_backend(Backend backend) noexcept {
  if (!cpu_supports(backend)) return false;
  current().store(&table_for(backend), std::memory_order_relaxed);
  return true;
}

std::string_view name(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

}  // namespace pctcoef::kernels
