#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "patternlens/encoder.hpp"
#include "patternlens/tensor.hpp"

namespace patternlens::testing {

// Uniform [0, 1] pixels.
Image random_image(int height, int width, std::uint64_t seed);

// Uniform random feature map with values in [lo, hi).
FeatureMap random_features(int channels, int height, int width, std::uint64_t seed, double lo = 0.0, double hi = 1.0);

// `ratio` x `ratio` copies of `tile`.
Image tile_image(const Image& tile, int ratio);

// ratio x ratio quadrants, each independent noise whose three channels mix
// with a distinct random 3x3 correlation matrix.
Image correlated_quadrant_noise(int side, int ratio, std::uint64_t seed);

// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace patternlens::testing
