#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patternlens/tensor.hpp"

namespace patternlens {

// One of the five encoder activations relu1_1 ... relu5_1.
struct LayerTap {
  std::string_view name;
  int index;     // 1..5
  int channels;  // VGG-19 channel count
  int stride;    // 2^(index-1)
};

inline constexpr std::array<LayerTap, 5> kVggTaps{{
    {"relu1_1", 1, 64, 1},
    {"relu2_1", 2, 128, 2},
    {"relu3_1", 3, 256, 4},
    {"relu4_1", 4, 512, 8},
    {"relu5_1", 5, 512, 16},
}};

const LayerTap& layer_tap(int index);

struct TapFeatures {
  int index;
  FeatureMap map;
};

class FeaturePyramid {
 public:
  FeaturePyramid(int source_height, int source_width, std::vector<TapFeatures> taps);

  int source_height() const noexcept { return source_height_; }
  int source_width() const noexcept { return source_width_; }
  const std::vector<TapFeatures>& taps() const noexcept { return taps_; }

  bool has(int index) const noexcept;
  // Throws MissingTap.
  const FeatureMap& at(int index) const;

 private:
  int source_height_;
  int source_width_;
  std::vector<TapFeatures> taps_;
};

// Builds an ad-hoc pyramid whose taps are numbered 1..N in order; used when
// features come from somewhere other than an encoder.
FeaturePyramid make_pyramid(std::vector<FeatureMap> maps);

// Feature extractor. Implementations are immutable after construction and
// safe to call concurrently.
class Encoder {
 public:
  virtual ~Encoder() = default;

  // Tap indices this backend can produce, ascending.
  virtual std::vector<int> available_taps() const = 0;
  // Smallest accepted image side.
  virtual int min_input_side() const = 0;
  virtual std::string describe() const = 0;

  // Requested taps only (empty = all available), ascending by index.
  // Throws InputTooSmall, MissingTap.
  FeaturePyramid encode(const Image& img, std::span<const int> taps = {}) const;

 protected:
  virtual std::vector<TapFeatures> run(const Image& img, std::span<const int> taps) const = 0;
};

// Deterministic stand-in for VGG-19: every tap is a seeded 1x1 linear map
// followed by ReLU, with 2x2 non-overlapping average pooling between taps.
// No operation mixes pixels across a 2^(depth-1) aligned block, so encoding
// commutes with tiling. The first three channels of every tap pass the
// (pooled) image through unchanged, which keeps features of any nonzero
// image nonzero.
class TestEncoder final : public Encoder {
 public:
  static constexpr int kDefaultWidth = 8;

  TestEncoder(std::uint64_t seed, int depth, int width = kDefaultWidth);

  std::vector<int> available_taps() const override;
  int min_input_side() const override;
  std::string describe() const override;

  std::uint64_t seed() const noexcept { return seed_; }
  int depth() const noexcept { return depth_; }
  // Output channels of tap `index`: width * 2^min(index-1, 3).
  int tap_channels(int index) const;

 protected:
  std::vector<TapFeatures> run(const Image& img, std::span<const int> taps) const override;

 private:
  struct Layer {
    int in_channels;
    int out_channels;
    std::vector<double> weights;  // out x in, row-major
    std::vector<double> bias;
  };

  std::uint64_t seed_;
  int depth_;
  int width_;
  std::vector<Layer> layers_;
};

// Input normalization and output naming for a serialized VGG graph.
struct ModelManifest {
  std::array<std::string, 5> outputs{"relu1_1", "relu2_1", "relu3_1", "relu4_1", "relu5_1"};
  std::array<double, 3> mean{0.485, 0.456, 0.406};
  std::array<double, 3> std{0.229, 0.224, 0.225};
  std::string input_range = "unit";  // "unit" ([0,1]) or "byte" ([0,255])

  // Parses {"outputs": [...], "mean": [...], "std": [...], "input_range": ...};
  // missing keys keep their defaults. Throws ModelLoadError.
  static ModelManifest from_json(std::string_view text);
  // `<model>.json` if present, otherwise the model path with its extension
  // replaced by `.json`, otherwise defaults.
  static ModelManifest for_model(const std::filesystem::path& model);
};

// Pretrained encoder loaded from an ONNX graph exposing the five taps as
// named outputs.
class OnnxEncoder final : public Encoder {
 public:
  explicit OnnxEncoder(const std::filesystem::path& model);
  OnnxEncoder(const std::filesystem::path& model, ModelManifest manifest);
  ~OnnxEncoder() override;

  std::vector<int> available_taps() const override;
  int min_input_side() const override { return 32; }
  std::string describe() const override;

  const ModelManifest& manifest() const noexcept { return manifest_; }

 protected:
  std::vector<TapFeatures> run(const Image& img, std::span<const int> taps) const override;

 private:
  struct Impl;
  std::filesystem::path path_;
  ModelManifest manifest_;
  std::unique_ptr<Impl> impl_;
};

// "pretrained" (model from `model_path`, else $PATTERNLENS_MODEL) or
// "test:<seed>:<depth>[:<width>]". Throws InvalidArgument, ModelLoadError.
std::shared_ptr<const Encoder> make_encoder(std::string_view backend,
                                            const std::filesystem::path& model_path = {});

}  // namespace patternlens
