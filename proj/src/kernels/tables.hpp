#pragma once

#include "pctcoef/kernels.hpp"

namespace pctcoef::kernels {

const KernelTable& scalar_table() noexcept;
#if defined(PCTCOEF_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(PCTCOEF_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif

}  // namespace pctcoef::kernels
