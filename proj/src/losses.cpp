#include "patternlens/losses.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "patternlens/error.hpp"
#include "patternlens/simd.hpp"

namespace patternlens {
namespace {

double feature_distance(const FeatureMap& a, const FeatureMap& b) {
  if (!a.same_shape(b)) fail(ErrorCode::ShapeMismatch, "feature maps differ in shape");
  return std::sqrt(simd::squared_distance(a.data(), b.data()));
}

double gram_loss(const FeaturePyramid& a, const FeaturePyramid& b, bool centered) {
  double total = 0.0;
  for (int tap : kStyleTaps) total += gram_distance(gram(a.at(tap), centered), gram(b.at(tap), centered));
  return total;
}

double feature_loss(const Image& x, const Image& y, const Encoder& encoder, std::span<const int> taps) {
  const auto fx = encoder.encode(x, taps);
  const auto fy = encoder.encode(y, taps);
  double total = 0.0;
  for (int tap : taps) total += feature_distance(fx.at(tap), fy.at(tap));
  return total;
}

}  // namespace

void LossWeights::validate() const {
  for (double w : {identity, cx, content, image, lf, patch, color, adv, tv}) {
    require(std::isfinite(w) && w >= 0.0, ErrorCode::DomainError, "loss weights must be finite and nonnegative");
  }
}

void LossWeights::apply_overrides(std::string_view spec) {
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;

    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::InvalidArgument, "weight override needs name=value: " + std::string(item));
    const std::string_view name = item.substr(0, eq);
    const std::string_view text = item.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail(ErrorCode::InvalidArgument, "invalid weight value: " + std::string(item));
    }

    double* field = nullptr;
    if (name == "identity") field = &identity;
    else if (name == "cx") field = &cx;
    else if (name == "content") field = &content;
    else if (name == "image") field = &image;
    else if (name == "lf") field = &lf;
    else if (name == "patch") field = &patch;
    else if (name == "color") field = &color;
    else if (name == "adv") field = &adv;
    else if (name == "tv") field = &tv;
    else fail(ErrorCode::InvalidArgument, "unknown loss weight '" + std::string(name) + "'");
    *field = value;
  }
  validate();
}

ColorHistogram ColorHistogram::of(const Image& img) {
  require(!img.empty(), ErrorCode::InvalidArgument, "histogram of an empty image");
  ColorHistogram h;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const int bin = std::min(static_cast<int>(img.at(y, x, c) * kBins), kBins - 1);
        h.bins[c][bin] += 1.0;
      }
    }
  }
  const double inv = 1.0 / (static_cast<double>(img.height()) * img.width());
  for (auto& channel : h.bins) {
    for (double& v : channel) v *= inv;
  }
  return h;
}

double image_style_loss(const Image& stylized, const Image& style, const Encoder& encoder, bool centered) {
  return gram_loss(encoder.encode(stylized, kStyleTaps), encoder.encode(style, kStyleTaps), centered);
}

double patch_style_loss(const Image& stylized, const Image& style, int scale, const Encoder& encoder) {
  require(scale >= 1, ErrorCode::DomainError, "patch scale must be >= 1");
  if (stylized.height() != style.height() || stylized.width() != style.width()) {
    fail(ErrorCode::ShapeMismatch, "patch style loss needs equally sized images");
  }
  const int side = std::min(stylized.height(), stylized.width()) / scale;
  if (side < encoder.min_input_side()) {
    fail(ErrorCode::PatchTooSmall, "patch side " + std::to_string(side) + " px is below the encoder minimum " +
                                       std::to_string(encoder.min_input_side()));
  }
  const auto a = patchify(stylized, scale);
  const auto b = patchify(style, scale);
  double total = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    total += gram_loss(encoder.encode(a[m], kStyleTaps), encoder.encode(b[m], kStyleTaps), true);
  }
  return total / static_cast<double>(a.size());
}

double content_loss(const Image& stylized, const Image& content, const Encoder& encoder) {
  return feature_loss(stylized, content, encoder, kStyleTaps);
}

double identity_loss(const Image& reconstruction, const Image& original, const Encoder& encoder) {
  return feature_loss(reconstruction, original, encoder, kIdentityTaps);
}

double local_feature_loss(const Image& stylized, std::span<const TapFeatures> references, const Encoder& encoder) {
  require(!references.empty(), ErrorCode::InvalidArgument, "local feature loss needs reference taps");
  std::vector<int> taps;
  for (const auto& r : references) taps.push_back(r.index);
  const auto features = encoder.encode(stylized, taps);
  double total = 0.0;
  for (const auto& r : references) total += feature_distance(features.at(r.index), r.map);
  return total;
}

double color_loss(const Image& stylized, const Image& style) {
  const auto a = ColorHistogram::of(stylized);
  const auto b = ColorHistogram::of(style);
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < ColorHistogram::kBins; ++k) {
      const double d = std::sqrt(a.bins[c][k]) - std::sqrt(b.bins[c][k]);
      acc += d * d;
    }
  }
  return std::sqrt(acc) / std::sqrt(2.0);
}

double tv_loss(const Image& img) {
  const int h = img.height();
  const int w = img.width();
  double horizontal = 0.0;
  double vertical = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        if (x + 1 < w) horizontal += std::abs(img.at(y, x + 1, c) - img.at(y, x, c));
        if (y + 1 < h) vertical += std::abs(img.at(y + 1, x, c) - img.at(y, x, c));
      }
    }
  }
  double total = 0.0;
  if (w > 1) total += horizontal / (3.0 * h * (w - 1));
  if (h > 1) total += vertical / (3.0 * (h - 1) * w);
  return total;
}

double weighted_total(const LossBreakdown& t, const LossWeights& w) {
  return w.image * t.image + w.patch * t.patch + w.lf * t.lf.value_or(0.0) + w.content * t.content +
         w.color * t.color + w.tv * t.tv;
}

LossBreakdown total_style_loss(const Image& content, const Image& style, const Image& stylized,
                               std::span<const TapFeatures> lf_references, const LossWeights& weights,
                               const Encoder& encoder, const RepeatabilityConfig& cfg) {
  weights.validate();
  LossBreakdown out;
  const auto report = pattern_repeatability(style, encoder, cfg);
  out.alpha_style = report.alpha_style;
  out.patch_scale = report.patch_scale;

  out.image = image_style_loss(stylized, style, encoder);
  out.patch = patch_style_loss(stylized, style, out.patch_scale, encoder);
  if (!lf_references.empty()) out.lf = local_feature_loss(stylized, lf_references, encoder);
  out.content = content_loss(stylized, content, encoder);
  out.color = color_loss(stylized, style);
  out.tv = tv_loss(stylized);
  out.total = weighted_total(out, weights);
  return out;
}

}  // namespace patternlens
