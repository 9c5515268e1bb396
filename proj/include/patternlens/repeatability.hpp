#pragma once

#include <cstdint>
#include <vector>

#include "patternlens/encoder.hpp"

namespace patternlens {

struct RepeatabilityConfig {
  int ratio = 2;                  // r: patch grid side, N = r^2 patches
  double pair_probability = 1.0;  // p: chance each patch pair enters the inter-patch mean
  std::uint64_t seed = 0;
  std::vector<int> taps;          // empty = every tap the encoder provides

  // Throws DomainError.
  void validate() const;
};

struct RepeatabilityReport {
  double alpha_intra_rgb = 0.0;
  double alpha_inter_rgb = 0.0;
  double alpha_intra_gray = 0.0;
  double alpha_inter_gray = 0.0;
  double alpha_style = 0.0;
  int patch_scale = 1;
  RepeatabilityConfig config;  // with `taps` resolved
};

// Mean over taps of the mean cosine between each patch Gram and the whole
// map's Gram. Zero-norm Grams count as similarity 0; taps too small for the
// grid are skipped. Throws NoValidTap when every tap was skipped.
double alpha_intra(const FeaturePyramid& pyramid, int ratio);

// Mean over taps of the mean cosine between Gram matrices of distinct patch
// pairs. Each of the N(N-1)/2 pairs is kept independently with probability
// `pair_probability`; an empty draw falls back to all pairs.
double alpha_inter(const FeaturePyramid& pyramid, int ratio, double pair_probability, std::uint64_t seed);

// Encodes the image and its grayscale version and fuses the four
// components by their mean.
RepeatabilityReport pattern_repeatability(const Image& img, const Encoder& encoder, const RepeatabilityConfig& cfg);

// round(max(2^(8 alpha - 5), 1)). Throws DomainError outside [0, 1].
int patch_scale(double alpha);

}  // namespace patternlens
