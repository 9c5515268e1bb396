#include "patternlens/repeatability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patternlens/error.hpp"

namespace patternlens {
namespace {

struct TapGrams {
  GramMatrix whole;
  std::vector<GramMatrix> patches;
};

// Cosine with the zero-norm policy applied.
double similarity(const GramMatrix& a, const GramMatrix& b) {
  if (a.frobenius_norm() == 0.0 || b.frobenius_norm() == 0.0) return 0.0;
  return gram_cosine(a, b);
}

std::vector<TapGrams> tap_grams(const FeaturePyramid& pyramid, int ratio) {
  require(ratio >= 1, ErrorCode::DomainError, "patch ratio must be >= 1");
  std::vector<TapGrams> out;
  for (const auto& tap : pyramid.taps()) {
    if (tap.map.height() / ratio == 0 || tap.map.width() / ratio == 0) continue;
    TapGrams tg{gram(tap.map), {}};
    for (const auto& patch : patchify(tap.map, ratio)) tg.patches.push_back(gram(patch));
    out.push_back(std::move(tg));
  }
  if (out.empty()) fail(ErrorCode::NoValidTap, "no tap admits a " + std::to_string(ratio) + "x" + std::to_string(ratio) + " grid");
  return out;
}

double intra(const std::vector<TapGrams>& grams) {
  double total = 0.0;
  for (const auto& tg : grams) {
    double acc = 0.0;
    for (const auto& p : tg.patches) acc += similarity(p, tg.whole);
    total += acc / static_cast<double>(tg.patches.size());
  }
  return total / static_cast<double>(grams.size());
}

// splitmix64-derived uniform draws in [0, 1).
class PairSampler {
 public:
  explicit PairSampler(std::uint64_t seed) : state_(seed) {}

  double uniform() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

double inter(const std::vector<TapGrams>& grams, double p, std::uint64_t seed) {
  double total = 0.0;
  std::uint64_t tap_no = 0;
  for (const auto& tg : grams) {
    const auto n = tg.patches.size();
    require(n >= 2, ErrorCode::DomainError, "inter-patch repeatability needs at least two patches");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    PairSampler sampler(seed + 0xD1B54A32D192ED03ULL * ++tap_no);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (p >= 1.0 || sampler.uniform() < p) pairs.emplace_back(i, j);
      }
    }
    if (pairs.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
      }
    }
    double acc = 0.0;
    for (const auto& [i, j] : pairs) acc += similarity(tg.patches[i], tg.patches[j]);
    total += acc / static_cast<double>(pairs.size());
  }
  return total / static_cast<double>(grams.size());
}

void check_probability(double p) {
  require(p > 0.0 && p <= 1.0, ErrorCode::DomainError, "pair probability must be in (0, 1]");
}

}  // namespace

void RepeatabilityConfig::validate() const {
  require(ratio >= 2, ErrorCode::DomainError, "patch ratio must be >= 2");
  check_probability(pair_probability);
  for (int t : taps) require(t >= 1 && t <= 5, ErrorCode::DomainError, "taps must be in 1..5");
}

double alpha_intra(const FeaturePyramid& pyramid, int ratio) { return intra(tap_grams(pyramid, ratio)); }

double alpha_inter(const FeaturePyramid& pyramid, int ratio, double pair_probability, std::uint64_t seed) {
  check_probability(pair_probability);
  return inter(tap_grams(pyramid, ratio), pair_probability, seed);
}

RepeatabilityReport pattern_repeatability(const Image& img, const Encoder& encoder, const RepeatabilityConfig& cfg) {
  cfg.validate();
  RepeatabilityReport report;
  report.config = cfg;
  if (report.config.taps.empty()) report.config.taps = encoder.available_taps();

  const auto rgb = tap_grams(encoder.encode(img, report.config.taps), cfg.ratio);
  const auto gray = tap_grams(encoder.encode(to_grayscale(img), report.config.taps), cfg.ratio);
  report.alpha_intra_rgb = intra(rgb);
  report.alpha_inter_rgb = inter(rgb, cfg.pair_probability, cfg.seed);
  report.alpha_intra_gray = intra(gray);
  report.alpha_inter_gray = inter(gray, cfg.pair_probability, cfg.seed);
  report.alpha_style = (report.alpha_inter_rgb + report.alpha_intra_rgb + report.alpha_inter_gray +
                        report.alpha_intra_gray) /
                       4.0;
  // Cosines can overshoot 1 by an ulp; the scale rule needs [0, 1].
  report.patch_scale = patch_scale(std::clamp(report.alpha_style, 0.0, 1.0));
  return report;
}

int patch_scale(double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::DomainError, "alpha must be in [0, 1]");
  const double s = std::max(std::exp2(8.0 * alpha - 5.0), 1.0);
  return std::max(static_cast<int>(std::lround(s)), 1);
}

}  // namespace patternlens
