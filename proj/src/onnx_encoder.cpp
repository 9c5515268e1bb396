#include <mutex>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include "patternlens/encoder.hpp"
#include "patternlens/error.hpp"

namespace patternlens {

struct OnnxEncoder::Impl {
  cv::dnn::Net net;
  // cv::dnn::Net::forward mutates internal buffers.
  std::mutex mutex;
};

OnnxEncoder::OnnxEncoder(const std::filesystem::path& model) : OnnxEncoder(model, ModelManifest::for_model(model)) {}

OnnxEncoder::OnnxEncoder(const std::filesystem::path& model, ModelManifest manifest)
    : path_(model), manifest_(std::move(manifest)), impl_(std::make_unique<Impl>()) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(model, ec)) {
    fail(ErrorCode::ModelLoadError, "model file not found: " + model.string());
  }
  try {
    impl_->net = cv::dnn::readNetFromONNX(model.string());
  } catch (const cv::Exception& e) {
    fail(ErrorCode::ModelLoadError, "cannot parse " + model.string() + ": " + e.what());
  }
  if (impl_->net.empty()) fail(ErrorCode::ModelLoadError, "empty network in " + model.string());
  impl_->net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
  impl_->net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
}

OnnxEncoder::~OnnxEncoder() = default;

std::vector<int> OnnxEncoder::available_taps() const { return {1, 2, 3, 4, 5}; }

std::string OnnxEncoder::describe() const { return "pretrained:" + path_.string(); }

std::vector<TapFeatures> OnnxEncoder::run(const Image& img, std::span<const int> taps) const {
  const int h = img.height();
  const int w = img.width();
  const double range = manifest_.input_range == "byte" ? 255.0 : 1.0;
  const int dims[] = {1, 3, h, w};
  cv::Mat blob(4, dims, CV_32F);
  auto* dst = blob.ptr<float>();
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        dst[(static_cast<std::size_t>(c) * h + y) * w + x] =
            static_cast<float>((img.at(y, x, c) * range - manifest_.mean[c]) / manifest_.std[c]);
      }
    }
  }

  std::vector<cv::String> names;
  for (int t : taps) names.push_back(manifest_.outputs[t - 1]);
  std::vector<cv::Mat> outs;
  {
    std::lock_guard lock(impl_->mutex);
    try {
      impl_->net.setInput(blob);
      impl_->net.forward(outs, names);
    } catch (const cv::Exception& e) {
      fail(ErrorCode::ModelLoadError, std::string("model inference failed: ") + e.what());
    }
    // forward() may hand back views into network-owned buffers.
    for (auto& m : outs) m = m.clone();
  }

  std::vector<TapFeatures> result;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const cv::Mat& m = outs[k];
    const int tap = taps[k];
    if (m.dims != 4 || m.size[0] != 1 || m.type() != CV_32F) {
      fail(ErrorCode::ModelLoadError, "output " + names[k] + " is not a 1xCxHxW float tensor");
    }
    const int c = m.size[1];
    const int oh = m.size[2];
    const int ow = m.size[3];
    const int stride = layer_tap(tap).stride;
    if (oh != h / stride || ow != w / stride) {
      fail(ErrorCode::ModelLoadError, "output " + names[k] + " has unexpected spatial size");
    }
    const auto* src = m.ptr<float>();
    std::vector<double> data(src, src + static_cast<std::size_t>(c) * oh * ow);
    result.push_back({tap, FeatureMap(c, oh, ow, std::move(data))});
  }
  return result;
}

}  // namespace patternlens
