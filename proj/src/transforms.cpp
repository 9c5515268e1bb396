#include "patternlens/transforms.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "patternlens/error.hpp"
#include "patternlens/simd.hpp"

namespace patternlens {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// (C, H*W) view of a feature map.
Eigen::Map<const RowMatrix> as_matrix(const FeatureMap& f) {
  return {f.data().data(), f.channels(), static_cast<Eigen::Index>(f.spatial())};
}

FeatureMap from_matrix(const RowMatrix& m, int height, int width) {
  return FeatureMap(static_cast<int>(m.rows()), height, width, std::vector<double>(m.data(), m.data() + m.size()));
}

void check_channels(const FeatureMap& a, const FeatureMap& b) {
  if (a.channels() != b.channels()) {
    fail(ErrorCode::ChannelMismatch,
         std::to_string(a.channels()) + " vs " + std::to_string(b.channels()) + " channels");
  }
}

struct ChannelStats {
  double mean;
  double stddev;
};

ChannelStats channel_stats(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = simd::sum(x) / n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

struct SymmetricRoot {
  Eigen::MatrixXd inverse_sqrt;
  Eigen::MatrixXd sqrt;
};

SymmetricRoot symmetric_roots(const Eigen::MatrixXd& cov, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "covariance eigendecomposition did not converge");
  const Eigen::VectorXd d = solver.eigenvalues().cwiseMax(eps);
  const Eigen::MatrixXd& e = solver.eigenvectors();
  return {e * d.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose(), e * d.cwiseSqrt().asDiagonal() * e.transpose()};
}

RowMatrix centered(const FeatureMap& f, Eigen::VectorXd* means = nullptr) {
  RowMatrix x = as_matrix(f);
  const Eigen::VectorXd mu = x.rowwise().mean();
  x.colwise() -= mu;
  if (means) *means = mu;
  return x;
}

// Adaptive average pooling to (height, width).
FeatureMap pool_to(const FeatureMap& f, int height, int width) {
  if (f.height() == height && f.width() == width) return f;
  require(f.height() >= height && f.width() >= width, ErrorCode::ShapeMismatch, "cannot pool to a larger size");
  FeatureMap out(f.channels(), height, width);
  for (int y = 0; y < height; ++y) {
    const int y0 = y * f.height() / height;
    const int y1 = ((y + 1) * f.height() + height - 1) / height;
    for (int x = 0; x < width; ++x) {
      const int x0 = x * f.width() / width;
      const int x1 = ((x + 1) * f.width() + width - 1) / width;
      const double inv = 1.0 / ((y1 - y0) * (x1 - x0));
      for (int c = 0; c < f.channels(); ++c) {
        double acc = 0.0;
        for (int yy = y0; yy < y1; ++yy) {
          for (int xx = x0; xx < x1; ++xx) acc += f.at(c, yy, xx);
        }
        out.at(c, y, x) = acc * inv;
      }
    }
  }
  return out;
}

// Instance-normalized taps 1..tap pooled to the tap's resolution, stacked.
RowMatrix attention_source(const FeaturePyramid& pyr, int tap) {
  const FeatureMap& target = pyr.at(tap);
  std::vector<FeatureMap> parts;
  int channels = 0;
  for (int l = 1; l <= tap; ++l) {
    parts.push_back(instance_normalize(pool_to(pyr.at(l), target.height(), target.width())));
    channels += parts.back().channels();
  }
  RowMatrix out(channels, static_cast<Eigen::Index>(target.spatial()));
  Eigen::Index row = 0;
  for (const auto& p : parts) {
    out.middleRows(row, p.channels()) = as_matrix(p);
    row += p.channels();
  }
  return out;
}

void apply_projection(const std::optional<Eigen::MatrixXd>& proj, RowMatrix& x, const char* role) {
  if (!proj) return;
  if (proj->rows() != x.rows() || proj->cols() != x.rows()) {
    fail(ErrorCode::ChannelMismatch, std::string(role) + " projection is " + std::to_string(proj->rows()) + "x" +
                                         std::to_string(proj->cols()) + ", features have " +
                                         std::to_string(x.rows()) + " channels");
  }
  x = (*proj * x).eval();
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double peak = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - peak).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

}  // namespace

FeatureMap instance_normalize(const FeatureMap& f, double eps) {
  FeatureMap out = f;
  for (int c = 0; c < f.channels(); ++c) {
    const auto [mean, stddev] = channel_stats(f.channel(c));
    const double inv = 1.0 / (stddev + eps);
    for (double& v : out.channel(c)) v = (v - mean) * inv;
  }
  return out;
}

FeatureMap adain(const FeatureMap& content, const FeatureMap& style) {
  check_channels(content, style);
  FeatureMap out = content;
  for (int c = 0; c < content.channels(); ++c) {
    const auto cs = channel_stats(content.channel(c));
    const auto ss = channel_stats(style.channel(c));
    const double gain = ss.stddev / (cs.stddev + kAdainEpsilon);
    for (double& v : out.channel(c)) v = (v - cs.mean) * gain + ss.mean;
  }
  return out;
}

Eigen::MatrixXd feature_covariance(const FeatureMap& f) {
  require(f.spatial() >= 2, ErrorCode::InvalidArgument, "covariance needs at least two positions");
  const RowMatrix x = centered(f);
  return (x * x.transpose()) / static_cast<double>(f.spatial() - 1);
}

FeatureMap whiten(const FeatureMap& content, double eps) {
  require(content.spatial() >= 2, ErrorCode::InvalidArgument, "whitening needs at least two positions");
  const RowMatrix x = centered(content);
  const Eigen::MatrixXd cov = (x * x.transpose()) / static_cast<double>(content.spatial() - 1);
  const RowMatrix w = symmetric_roots(cov, eps).inverse_sqrt * x;
  return from_matrix(w, content.height(), content.width());
}

FeatureMap wct(const FeatureMap& content, const FeatureMap& style, double eps) {
  check_channels(content, style);
  require(content.spatial() >= 2 && style.spatial() >= 2, ErrorCode::InvalidArgument,
          "wct needs at least two positions per input");
  const RowMatrix xc = centered(content);
  Eigen::VectorXd style_mean;
  const RowMatrix xs = centered(style, &style_mean);
  const Eigen::MatrixXd cov_c = (xc * xc.transpose()) / static_cast<double>(content.spatial() - 1);
  const Eigen::MatrixXd cov_s = (xs * xs.transpose()) / static_cast<double>(style.spatial() - 1);

  RowMatrix out = symmetric_roots(cov_s, eps).sqrt * (symmetric_roots(cov_c, eps).inverse_sqrt * xc);
  out.colwise() += style_mean;
  return from_matrix(out, content.height(), content.width());
}

Eigen::MatrixXd attention_weights(const FeatureMap& query, const FeatureMap& key) {
  check_channels(query, key);
  const Eigen::MatrixXd logits =
      (as_matrix(query).transpose() * as_matrix(key)) / std::sqrt(static_cast<double>(query.channels()));
  return softmax_rows(logits);
}

FeatureMap attention_transfer(const FeaturePyramid& content, const FeaturePyramid& style, int tap,
                              const ProjectionSet& proj) {
  require(tap >= 1, ErrorCode::MissingTap, "tap index must be >= 1");
  const FeatureMap& content_tap = content.at(tap);
  const FeatureMap& style_tap = style.at(tap);
  check_channels(content_tap, style_tap);

  RowMatrix q = attention_source(content, tap);
  RowMatrix k = attention_source(style, tap);
  if (q.rows() != k.rows()) fail(ErrorCode::ChannelMismatch, "query and key channel counts differ");
  apply_projection(proj.query, q, "query");
  apply_projection(proj.key, k, "key");
  RowMatrix v = as_matrix(style_tap);
  apply_projection(proj.value, v, "value");

  const Eigen::MatrixXd logits = (q.transpose() * k) / std::sqrt(static_cast<double>(q.rows()));
  const Eigen::MatrixXd attn = softmax_rows(logits);  // (Nc, Ns)

  const Eigen::MatrixXd mean = attn * v.transpose();                            // (Nc, C)
  // Attention-weighted variance about each query's own mean. Expanding it
  // as E[v^2] - M^2 cancels catastrophically when the style is flat.
  Eigen::MatrixXd stddev(mean.rows(), mean.cols());
  for (Eigen::Index c = 0; c < v.rows(); ++c) {
    const Eigen::MatrixXd dev = (-mean.col(c)).replicate(1, v.cols()).rowwise() + v.row(c);
    stddev.col(c) = attn.cwiseProduct(dev.cwiseAbs2()).rowwise().sum().cwiseSqrt();
  }

  const RowMatrix normed = as_matrix(instance_normalize(content_tap));
  const RowMatrix out = stddev.transpose().cwiseProduct(normed) + mean.transpose();
  return from_matrix(out, content_tap.height(), content_tap.width());
}

FeatureMap attn_fuse(const FeatureMap& f4, const FeatureMap& f5, const ProjectionSet& proj) {
  if (f4.channels() != f5.channels() || std::abs(2 * f5.height() - f4.height()) > 1 ||
      std::abs(2 * f5.width() - f4.width()) > 1) {
    fail(ErrorCode::ShapeMismatch, "attn_fuse expects f5 at half the resolution of f4 with equal channels");
  }
  FeatureMap sum = f4;
  for (int c = 0; c < f4.channels(); ++c) {
    for (int y = 0; y < f4.height(); ++y) {
      const int sy = std::min(y * f5.height() / f4.height(), f5.height() - 1);
      for (int x = 0; x < f4.width(); ++x) {
        const int sx = std::min(x * f5.width() / f4.width(), f5.width() - 1);
        sum.at(c, y, x) += f5.at(c, sy, sx);
      }
    }
  }
  if (!proj.fuse) return sum;
  RowMatrix m = as_matrix(sum);
  apply_projection(proj.fuse, m, "fuse");
  return from_matrix(m, sum.height(), sum.width());
}

FeatureMap blend(const FeatureMap& attn, const FeatureMap& global, double alpha) {
  require(attn.same_shape(global), ErrorCode::ShapeMismatch, "blend inputs differ in shape");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::DomainError, "blend alpha must be in [0, 1]");
  if (alpha == 1.0) return attn;
  if (alpha == 0.0) return global;
  FeatureMap out = global;
  auto dst = out.data();
  const auto a = attn.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = alpha * a[i] + (1.0 - alpha) * dst[i];
  return out;
}

}  // namespace patternlens
