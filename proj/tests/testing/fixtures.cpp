#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

namespace patternlens::testing {

Image random_image(int height, int width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Image img(height, width);
  for (double& v : img.data()) v = dist(rng);
  return img;
}

FeatureMap random_features(int channels, int height, int width, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  FeatureMap f(channels, height, width);
  for (double& v : f.data()) v = dist(rng);
  return f;
}

Image tile_image(const Image& tile, int ratio) {
  Image out(tile.height() * ratio, tile.width() * ratio);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = tile.at(y % tile.height(), x % tile.width(), c);
    }
  }
  return out;
}

Image correlated_quadrant_noise(int side, int ratio, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int q = side / ratio;
  Image out(side, side);
  for (int gy = 0; gy < ratio; ++gy) {
    for (int gx = 0; gx < ratio; ++gx) {
      // Nonnegative mixing rows normalized to sum 1 keep pixels in [0, 1];
      // a per-quadrant brightness scale makes the Gram matrices differ.
      double mix[3][3];
      for (auto& row : mix) {
        double total = 0.0;
        for (double& m : row) total += (m = std::pow(unit(rng), 4.0));
        for (double& m : row) m /= total;
      }
      const double gain = 0.15 + 0.85 * unit(rng);
      for (int y = gy * q; y < (gy + 1) * q; ++y) {
        for (int x = gx * q; x < (gx + 1) * q; ++x) {
          const double n[3] = {unit(rng), unit(rng), unit(rng)};
          for (int c = 0; c < 3; ++c) {
            out.at(y, x, c) = gain * (mix[c][0] * n[0] + mix[c][1] * n[1] + mix[c][2] * n[2]);
          }
        }
      }
    }
  }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  std::random_device rd;
  path_ = base / ("patternlens-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace patternlens::testing
