#include <algorithm>
#include <cmath>

#include "patternlens/error.hpp"
#include "patternlens/image_ops.hpp"

namespace patternlens {
namespace {

struct Tap1d {
  int lo;
  int hi;
  double frac;
};

std::vector<Tap1d> linear_taps(int src, int dst) {
  std::vector<Tap1d> taps(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    const double pos = std::max((i + 0.5) * scale - 0.5, 0.0);
    const int lo = std::min(static_cast<int>(pos), src - 1);
    taps[i] = {lo, std::min(lo + 1, src - 1), pos - lo};
  }
  return taps;
}

}  // namespace

Image resize(const Image& img, int height, int width) {
  require(height >= 1 && width >= 1, ErrorCode::InvalidArgument, "resize target must be >= 1");
  if (height == img.height() && width == img.width()) return img;

  const auto ty = linear_taps(img.height(), height);
  const auto tx = linear_taps(img.width(), width);
  Image out(height, width);
  for (int y = 0; y < height; ++y) {
    const auto [y0, y1, fy] = ty[y];
    for (int x = 0; x < width; ++x) {
      const auto [x0, x1, fx] = tx[x];
      for (int c = 0; c < Image::kChannels; ++c) {
        const double top = img.at(y0, x0, c) + fx * (img.at(y0, x1, c) - img.at(y0, x0, c));
        const double bottom = img.at(y1, x0, c) + fx * (img.at(y1, x1, c) - img.at(y1, x0, c));
        out.at(y, x, c) = std::clamp(top + fy * (bottom - top), 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace patternlens
