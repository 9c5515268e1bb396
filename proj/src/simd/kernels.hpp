#pragma once

#include "patternlens/simd.hpp"

namespace patternlens::simd::detail {

extern const KernelTable kScalarTable;
#if defined(PATTERNLENS_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(PATTERNLENS_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace patternlens::simd::detail
