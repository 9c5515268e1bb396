#pragma once

#include <array>
#include <filesystem>

#include "patternlens/encoder.hpp"
#include "patternlens/repeatability.hpp"

namespace patternlens {

struct CropBox {
  int top;
  int left;
  int side;

  friend bool operator==(const CropBox&, const CropBox&) = default;
};

inline constexpr int kCropResize = 256;
inline constexpr int kMinCropSource = 64;

// Four corners then center, each square with side floor(min(H, W) / 2).
// Throws ImageTooSmall when min(H, W) < 64.
std::array<CropBox, 5> five_crop_boxes(int height, int width);

// Layer-averaged cosine similarity between flattened feature maps of every
// encoder tap. Throws ZeroNormFeature.
double content_fidelity(const Image& stylized, const Image& content, const Encoder& encoder);

// Mean image-level style loss over five matched crops, each resized to
// 256x256.
double style_loss_metric(const Image& stylized, const Image& style, const Encoder& encoder);

// |alpha_style(style) - alpha_style(stylized)|.
double pattern_difference(const Image& style, const Image& stylized, const Encoder& encoder,
                          const RepeatabilityConfig& cfg);

struct EvalReport {
  double content_fidelity = 0.0;
  double style_loss_5crop = 0.0;
  double pattern_difference = 0.0;
  double alpha_style = 0.0;
  double alpha_stylized = 0.0;
  RepeatabilityConfig config;
};

EvalReport evaluate_triple(const Image& content, const Image& style, const Image& stylized, const Encoder& encoder,
                           const RepeatabilityConfig& cfg);

// Loads the three files first; throws IoError for unreadable inputs.
EvalReport evaluate_triple(const std::filesystem::path& content, const std::filesystem::path& style,
                           const std::filesystem::path& stylized, const Encoder& encoder,
                           const RepeatabilityConfig& cfg);

}  // namespace patternlens
