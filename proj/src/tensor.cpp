#include "patternlens/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patternlens/error.hpp"
#include "patternlens/simd.hpp"

namespace patternlens {

Image::Image(int height, int width) : height_(height), width_(width) {
  require(height >= 1 && width >= 1, ErrorCode::InvalidArgument, "image dimensions must be >= 1");
  data_.assign(static_cast<std::size_t>(height) * width * kChannels, 0.0);
}

Image::Image(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  require(height >= 1 && width >= 1, ErrorCode::InvalidArgument, "image dimensions must be >= 1");
  require(data_.size() == static_cast<std::size_t>(height) * width * kChannels,
          ErrorCode::ShapeMismatch, "image data size does not match dimensions");
  for (double v : data_) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::DomainError,
            "image values must be finite and within [0, 1]");
  }
}

Image Image::filled(int height, int width, double r, double g, double b) {
  Image img(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(y, x, 0) = r;
      img.at(y, x, 1) = g;
      img.at(y, x, 2) = b;
    }
  }
  return Image(height, width, std::move(img.data_));
}

Image Image::crop(int top, int left, int height, int width) const {
  require(top >= 0 && left >= 0 && height >= 1 && width >= 1 && top + height <= height_ &&
              left + width <= width_,
          ErrorCode::InvalidArgument, "crop window outside image");
  Image out(height, width);
  for (int y = 0; y < height; ++y) {
    const double* src = data_.data() + index(top + y, left, 0);
    std::copy(src, src + static_cast<std::size_t>(width) * kChannels, out.data_.data() + out.index(y, 0, 0));
  }
  return out;
}

FeatureMap::FeatureMap(int channels, int height, int width)
    : channels_(channels), height_(height), width_(width) {
  require(channels >= 1 && height >= 1 && width >= 1, ErrorCode::InvalidArgument,
          "feature map dimensions must be >= 1");
  data_.assign(static_cast<std::size_t>(channels) * height * width, 0.0);
}

FeatureMap::FeatureMap(int channels, int height, int width, std::vector<double> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
  require(channels >= 1 && height >= 1 && width >= 1, ErrorCode::InvalidArgument,
          "feature map dimensions must be >= 1");
  require(data_.size() == static_cast<std::size_t>(channels) * height * width, ErrorCode::ShapeMismatch,
          "feature data size does not match dimensions");
  for (double v : data_) require(std::isfinite(v), ErrorCode::DomainError, "feature values must be finite");
}

FeatureMap FeatureMap::window(int top, int left, int height, int width) const {
  require(top >= 0 && left >= 0 && height >= 1 && width >= 1 && top + height <= height_ &&
              left + width <= width_,
          ErrorCode::InvalidArgument, "feature window outside map");
  FeatureMap out(channels_, height, width);
  for (int c = 0; c < channels_; ++c) {
    for (int y = 0; y < height; ++y) {
      const auto src = data_.begin() + (static_cast<std::size_t>(c) * height_ + top + y) * width_ + left;
      std::copy(src, src + width, &out.at(c, y, 0));
    }
  }
  return out;
}

GramMatrix::GramMatrix(int dim, std::vector<double> data, bool centered)
    : dim_(dim), data_(std::move(data)), centered_(centered) {
  require(dim >= 1 && data_.size() == static_cast<std::size_t>(dim) * dim, ErrorCode::ShapeMismatch,
          "gram data size does not match dimension");
}

double GramMatrix::frobenius_norm() const { return std::sqrt(simd::dot(data_, data_)); }

GramMatrix gram(const FeatureMap& f, bool centered) {
  require(f.size() > 0, ErrorCode::InvalidArgument, "gram of empty feature map");
  const int c = f.channels();
  const std::size_t n = f.spatial();
  const auto inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> centered_copy;
  std::span<const double> rows = f.data();
  if (centered) {
    centered_copy.assign(rows.begin(), rows.end());
    for (int k = 0; k < c; ++k) {
      std::span<double> ch(centered_copy.data() + k * n, n);
      const double mean = simd::sum(ch) * inv_n;
      for (double& v : ch) v -= mean;
    }
    rows = centered_copy;
  }

  std::vector<double> g(static_cast<std::size_t>(c) * c);
  for (int i = 0; i < c; ++i) {
    const auto ri = rows.subspan(i * n, n);
    for (int j = i; j < c; ++j) {
      const double v = simd::dot(ri, rows.subspan(j * n, n)) * inv_n;
      g[static_cast<std::size_t>(i) * c + j] = v;
      g[static_cast<std::size_t>(j) * c + i] = v;
    }
  }
  return GramMatrix(c, std::move(g), centered);
}

double gram_cosine(const GramMatrix& a, const GramMatrix& b) {
  require(a.dim() == b.dim(), ErrorCode::ShapeMismatch, "gram dimensions differ");
  const double na = a.frobenius_norm();
  const double nb = b.frobenius_norm();
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::ZeroNormGram, "cosine of a zero-norm gram matrix");
  return simd::dot(a.data(), b.data()) / (na * nb);
}

double gram_distance(const GramMatrix& a, const GramMatrix& b) {
  require(a.dim() == b.dim(), ErrorCode::ShapeMismatch, "gram dimensions differ");
  return std::sqrt(simd::squared_distance(a.data(), b.data()));
}

namespace {

void check_grid(int height, int width, int ratio) {
  require(ratio >= 1, ErrorCode::InvalidArgument, "patch ratio must be >= 1");
  if (height / ratio == 0 || width / ratio == 0) {
    fail(ErrorCode::PatchTooSmall, std::to_string(height) + "x" + std::to_string(width) +
                                       " cannot be divided into " + std::to_string(ratio) + "x" +
                                       std::to_string(ratio) + " patches");
  }
}

}  // namespace

std::vector<FeatureMap> patchify(const FeatureMap& f, int ratio) {
  check_grid(f.height(), f.width(), ratio);
  const int ph = f.height() / ratio;
  const int pw = f.width() / ratio;
  std::vector<FeatureMap> patches;
  patches.reserve(static_cast<std::size_t>(ratio) * ratio);
  for (int gy = 0; gy < ratio; ++gy) {
    for (int gx = 0; gx < ratio; ++gx) patches.push_back(f.window(gy * ph, gx * pw, ph, pw));
  }
  return patches;
}

std::vector<Image> patchify(const Image& img, int scale) {
  check_grid(img.height(), img.width(), scale);
  const int ph = img.height() / scale;
  const int pw = img.width() / scale;
  std::vector<Image> patches;
  patches.reserve(static_cast<std::size_t>(scale) * scale);
  for (int gy = 0; gy < scale; ++gy) {
    for (int gx = 0; gx < scale; ++gx) patches.push_back(img.crop(gy * ph, gx * pw, ph, pw));
  }
  return patches;
}

Image to_grayscale(const Image& img) {
  Image out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double luma = 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) + 0.114 * img.at(y, x, 2);
      luma = std::clamp(luma, 0.0, 1.0);
      out.at(y, x, 0) = luma;
      out.at(y, x, 1) = luma;
      out.at(y, x, 2) = luma;
    }
  }
  return out;
}

}  // namespace patternlens
