#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace patternlens {

// Decoded RGB raster, interleaved row-major (y, x, channel), values in [0, 1].
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  // Zero-filled image.
  Image(int height, int width);
  // Takes ownership of interleaved data; validates size, finiteness and range.
  Image(int height, int width, std::vector<double> data);

  static Image filled(int height, int width, double r, double g, double b);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int y, int x, int c) { return data_[index(y, x, c)]; }
  double at(int y, int x, int c) const { return data_[index(y, x, c)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  // Sub-rectangle copy; bounds must lie inside the image.
  Image crop(int top, int left, int height, int width) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// Dense (C, H, W) activation tensor.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width);
  FeatureMap(int channels, int height, int width, std::vector<double> data);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t spatial() const noexcept { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& at(int c, int y, int x) { return data_[(c * spatial()) + static_cast<std::size_t>(y) * width_ + x]; }
  double at(int c, int y, int x) const {
    return data_[(c * spatial()) + static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<double> channel(int c) { return {data_.data() + c * spatial(), spatial()}; }
  std::span<const double> channel(int c) const { return {data_.data() + c * spatial(), spatial()}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const FeatureMap& other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }

  // Spatial window [top, top+height) x [left, left+width), all channels.
  FeatureMap window(int top, int left, int height, int width) const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// C x C second-order statistic of a feature map.
class GramMatrix {
 public:
  GramMatrix() = default;
  GramMatrix(int dim, std::vector<double> data, bool centered);

  int dim() const noexcept { return dim_; }
  bool centered() const noexcept { return centered_; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * dim_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  double frobenius_norm() const;

 private:
  int dim_ = 0;
  std::vector<double> data_;
  bool centered_ = false;
};

// F Fᵀ / (H W) over the (C, H*W) flattening; `centered` subtracts each
// channel's spatial mean first.
GramMatrix gram(const FeatureMap& f, bool centered = false);

// Cosine similarity of the flattened matrices. Throws ZeroNormGram when
// either norm is zero.
double gram_cosine(const GramMatrix& a, const GramMatrix& b);

// Frobenius norm of a - b.
double gram_distance(const GramMatrix& a, const GramMatrix& b);

// r x r non-overlapping grid of (H/r, W/r) windows, row-major; remainder
// rows and columns are dropped. Throws PatchTooSmall when a window would be
// empty.
std::vector<FeatureMap> patchify(const FeatureMap& f, int ratio);
std::vector<Image> patchify(const Image& img, int scale);

// Rec.601 luma replicated into all three channels.
Image to_grayscale(const Image& img);

}  // namespace patternlens
