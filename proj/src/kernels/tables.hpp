#pragma once

#include "simsketch/kernels.hpp"

namespace simsketch::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(SIMSKETCH_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(SIMSKETCH_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace simsketch::kernels::detail
