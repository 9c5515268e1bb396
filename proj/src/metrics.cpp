#include "patternlens/metrics.hpp"

#include <cmath>
#include <string>

#include "patternlens/error.hpp"
#include "patternlens/image_ops.hpp"
#include "patternlens/losses.hpp"
#include "patternlens/simd.hpp"

namespace patternlens {

std::array<CropBox, 5> five_crop_boxes(int height, int width) {
  const int shorter = std::min(height, width);
  if (shorter < kMinCropSource) {
    fail(ErrorCode::ImageTooSmall, "five-crop evaluation needs a side of at least " +
                                       std::to_string(kMinCropSource) + " px, got " + std::to_string(shorter));
  }
  const int side = shorter / 2;
  return {{
      {0, 0, side},
      {0, width - side, side},
      {height - side, 0, side},
      {height - side, width - side, side},
      {(height - side) / 2, (width - side) / 2, side},
  }};
}

double content_fidelity(const Image& stylized, const Image& content, const Encoder& encoder) {
  const auto a = encoder.encode(stylized);
  const auto b = encoder.encode(content);
  double total = 0.0;
  for (std::size_t k = 0; k < a.taps().size(); ++k) {
    const auto& fa = a.taps()[k].map;
    const auto& fb = b.taps()[k].map;
    if (!fa.same_shape(fb)) fail(ErrorCode::ShapeMismatch, "content and stylized images differ in size");
    const double na = std::sqrt(simd::dot(fa.data(), fa.data()));
    const double nb = std::sqrt(simd::dot(fb.data(), fb.data()));
    if (na == 0.0 || nb == 0.0) {
      fail(ErrorCode::ZeroNormFeature, "tap " + std::to_string(a.taps()[k].index) + " has all-zero features");
    }
    total += simd::dot(fa.data(), fb.data()) / (na * nb);
  }
  return total / static_cast<double>(a.taps().size());
}

double style_loss_metric(const Image& stylized, const Image& style, const Encoder& encoder) {
  const auto boxes_a = five_crop_boxes(stylized.height(), stylized.width());
  const auto boxes_b = five_crop_boxes(style.height(), style.width());
  double total = 0.0;
  for (std::size_t k = 0; k < boxes_a.size(); ++k) {
    const auto& ba = boxes_a[k];
    const auto& bb = boxes_b[k];
    const Image ca = resize(stylized.crop(ba.top, ba.left, ba.side, ba.side), kCropResize, kCropResize);
    const Image cb = resize(style.crop(bb.top, bb.left, bb.side, bb.side), kCropResize, kCropResize);
    total += image_style_loss(ca, cb, encoder);
  }
  return total / static_cast<double>(boxes_a.size());
}

double pattern_difference(const Image& style, const Image& stylized, const Encoder& encoder,
                          const RepeatabilityConfig& cfg) {
  return std::abs(pattern_repeatability(style, encoder, cfg).alpha_style -
                  pattern_repeatability(stylized, encoder, cfg).alpha_style);
}

EvalReport evaluate_triple(const Image& content, const Image& style, const Image& stylized, const Encoder& encoder,
                           const RepeatabilityConfig& cfg) {
  EvalReport r;
  r.content_fidelity = content_fidelity(stylized, content, encoder);
  r.style_loss_5crop = style_loss_metric(stylized, style, encoder);
  const auto rs = pattern_repeatability(style, encoder, cfg);
  const auto rt = pattern_repeatability(stylized, encoder, cfg);
  r.alpha_style = rs.alpha_style;
  r.alpha_stylized = rt.alpha_style;
  r.pattern_difference = std::abs(rs.alpha_style - rt.alpha_style);
  r.config = rs.config;
  return r;
}

EvalReport evaluate_triple(const std::filesystem::path& content, const std::filesystem::path& style,
                           const std::filesystem::path& stylized, const Encoder& encoder,
                           const RepeatabilityConfig& cfg) {
  const Image c = load_image(content);
  const Image s = load_image(style);
  const Image t = load_image(stylized);
  return evaluate_triple(c, s, t, encoder, cfg);
}

}  // namespace patternlens
