#pragma once

// Data-parallel inner loops used by the Gram, encoder and loss code.
//
// Every kernel has a scalar reference implementation; vector variants
// (AVX2+FMA on x86-64, NEON on AArch64) are compiled in when the target
// supports them and selected once at runtime from the CPU feature bits.
// Setting PATTERNLENS_SIMD=scalar in the environment forces the reference
// path. Variants agree with the reference up to floating-point reassociation.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace patternlens::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] = max(x[i], 0)
  void (*relu)(double* x, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // sum_i (x[i] - y[i])^2
  double (*squared_distance)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// Kernel table for `isa`; nullptr when the build or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// The table selected for this process.
const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void relu(std::span<double> x) { active().relu(x.data(), x.size()); }

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  return active().squared_distance(x.data(), y.data(), x.size());
}

}  // namespace patternlens::simd
