#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "patternlens/encoder.hpp"
#include "patternlens/repeatability.hpp"

namespace patternlens {

// Loss weights. cx and adv belong to training-only terms that are not
// evaluated here; they are carried so configurations round-trip.
struct LossWeights {
  double identity = 1.0;
  double cx = 0.0;
  double content = 1.0;
  double image = 10.0;
  double lf = 100.0;
  double patch = 0.5;
  double color = 1.0;
  double adv = 0.0;
  double tv = 1.0;

  void validate() const;
  // Applies "name=value[,name=value...]" overrides. Throws InvalidArgument.
  void apply_overrides(std::string_view spec);
};

// 64 uniform bins per channel over [0, 1], each channel summing to 1.
struct ColorHistogram {
  static constexpr int kBins = 64;
  std::array<std::array<double, kBins>, 3> bins{};

  static ColorHistogram of(const Image& img);
};

// Taps entering the Gram/feature losses.
inline constexpr std::array<int, 2> kStyleTaps{4, 5};
inline constexpr std::array<int, 4> kIdentityTaps{2, 3, 4, 5};

// Sum over taps 4 and 5 of the Frobenius distance between Gram matrices.
double image_style_loss(const Image& stylized, const Image& style, const Encoder& encoder, bool centered = false);

// Both images are cut into scale x scale matched patches; returns the mean
// over patches of the centered-Gram image style loss. Throws ShapeMismatch
// for differently sized inputs and PatchTooSmall when patches are smaller
// than the encoder's minimum input side.
double patch_style_loss(const Image& stylized, const Image& style, int scale, const Encoder& encoder);

// Sum over taps 4 and 5 of the L2 distance between feature maps.
double content_loss(const Image& stylized, const Image& content, const Encoder& encoder);

// Sum over taps 2..5 of the L2 distance between feature maps.
double identity_loss(const Image& reconstruction, const Image& original, const Encoder& encoder);

// Sum over the given reference taps (normally 4 and 5) of the L2 distance
// between the stylized image's features and the reference. Throws
// ShapeMismatch.
double local_feature_loss(const Image& stylized, std::span<const TapFeatures> references, const Encoder& encoder);

// Hellinger distance between color histograms, (1/sqrt 2) ||sqrt Ha - sqrt Hb||.
double color_loss(const Image& stylized, const Image& style);

// Mean |horizontal forward difference| + mean |vertical forward difference|.
double tv_loss(const Image& img);

struct LossBreakdown {
  double image = 0.0;
  double patch = 0.0;
  std::optional<double> lf;  // unset when no attention references were supplied
  double content = 0.0;
  double color = 0.0;
  double tv = 0.0;
  double total = 0.0;
  double alpha_style = 0.0;
  int patch_scale = 1;
};

// Weighted sum of the stylization-path terms. The patch scale comes from the
// style image's pattern repeatability; an empty `lf_references` leaves the
// local-feature term out.
LossBreakdown total_style_loss(const Image& content, const Image& style, const Image& stylized,
                               std::span<const TapFeatures> lf_references, const LossWeights& weights,
                               const Encoder& encoder, const RepeatabilityConfig& cfg);

// Weighted sum of precomputed terms.
double weighted_total(const LossBreakdown& terms, const LossWeights& weights);

}  // namespace patternlens
