#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "patternlens/error.hpp"
#include "patternlens/image_ops.hpp"

namespace patternlens {

Image load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    fail(ErrorCode::IoError, "no such file: " + path.string());
  }
  cv::Mat bgr;
  try {
    bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    fail(ErrorCode::IoError, "cannot decode " + path.string() + ": " + e.what());
  }
  if (bgr.empty() || bgr.depth() != CV_8U) fail(ErrorCode::IoError, "cannot decode image: " + path.string());

  std::vector<double> data(static_cast<std::size_t>(bgr.rows) * bgr.cols * Image::kChannels);
  std::size_t k = 0;
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      data[k++] = row[x][2] / 255.0;
      data[k++] = row[x][1] / 255.0;
      data[k++] = row[x][0] / 255.0;
    }
  }
  return Image(bgr.rows, bgr.cols, std::move(data));
}

void save_image(const Image& img, const std::filesystem::path& path) {
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        row[x][2 - c] = cv::saturate_cast<uchar>(img.at(y, x, c) * 255.0);
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr);
  } catch (const cv::Exception& e) {
    fail(ErrorCode::IoError, "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) fail(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace patternlens
