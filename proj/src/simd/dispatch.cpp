#include <cstdlib>
#include <string>

#include "kernels.hpp"

namespace patternlens::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &detail::kScalarTable;
    case Isa::Avx2:
#if defined(PATTERNLENS_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &detail::kAvx2Table;
      }
#endif
      return nullptr;
    case Isa::Neon:
#if defined(PATTERNLENS_HAVE_NEON)
      return &detail::kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* table = kernels_for(isa)) out.push_back(table);
  }
  return out;
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("PATTERNLENS_SIMD")) {
    const std::string name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == to_string(isa)) {
        if (const KernelTable* table = kernels_for(isa)) return *table;
      }
    }
  }
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* table = kernels_for(isa)) return *table;
  }
  return detail::kScalarTable;
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace patternlens::simd
