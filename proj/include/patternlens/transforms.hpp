#pragma once

#include <filesystem>
#include <optional>

#include <Eigen/Core>

#include "patternlens/encoder.hpp"

namespace patternlens {

// Optional channel x channel maps for attention transfer and fusion.
// Unset roles act as the identity.
struct ProjectionSet {
  std::optional<Eigen::MatrixXd> query;
  std::optional<Eigen::MatrixXd> key;
  std::optional<Eigen::MatrixXd> value;
  std::optional<Eigen::MatrixXd> fuse;  // h(.) applied after attn_fuse
};

// Flat binary container: an 8-byte little-endian header length, a JSON header
// {"matrices": [{"role": ..., "rows": R, "cols": C}, ...]}, then each matrix
// as row-major little-endian float64 in header order.
ProjectionSet load_projections(const std::filesystem::path& path);
void save_projections(const ProjectionSet& set, const std::filesystem::path& path);

inline constexpr double kAdainEpsilon = 1e-5;
inline constexpr double kWctEpsilon = 1e-5;

// Per-channel renormalization of content to the style mean and (population)
// standard deviation.
FeatureMap adain(const FeatureMap& content, const FeatureMap& style);

// Channel covariance (unbiased, divisor n-1) of the centered map.
Eigen::MatrixXd feature_covariance(const FeatureMap& f);

// Centered content multiplied by E D^{-1/2} Eᵀ of its covariance; eigenvalues
// below `eps` are clamped to `eps`.
FeatureMap whiten(const FeatureMap& content, double eps = kWctEpsilon);

// Whitening-coloring transform: whitened content colored with E D^{1/2} Eᵀ
// of the style covariance, plus the style channel means.
FeatureMap wct(const FeatureMap& content, const FeatureMap& style, double eps = kWctEpsilon);

// Row-softmax(Qᵀ K / sqrt(d)) for (d, Hq, Wq) queries and (d, Hk, Wk) keys:
// one row per query position, one column per key position.
Eigen::MatrixXd attention_weights(const FeatureMap& query, const FeatureMap& key);

// Attention-weighted mean/std transfer at tap `tap`: queries and keys are
// instance-normalized concatenations of taps 1..tap pooled to tap
// resolution, values are the style tap features.
FeatureMap attention_transfer(const FeaturePyramid& content, const FeaturePyramid& style, int tap,
                              const ProjectionSet& proj = {});

// h(f4 + nearest_upsample(f5)).
FeatureMap attn_fuse(const FeatureMap& f4, const FeatureMap& f5, const ProjectionSet& proj = {});

// alpha * attn + (1 - alpha) * global.
FeatureMap blend(const FeatureMap& attn, const FeatureMap& global, double alpha);

// Instance normalization with population statistics; exposed for tests.
FeatureMap instance_normalize(const FeatureMap& f, double eps = kAdainEpsilon);

}  // namespace patternlens
