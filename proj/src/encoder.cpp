#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "patternlens/encoder.hpp"
#include "patternlens/error.hpp"

namespace patternlens {

const LayerTap& layer_tap(int index) {
  require(index >= 1 && index <= 5, ErrorCode::MissingTap, "tap index must be in 1..5");
  return kVggTaps[index - 1];
}

FeaturePyramid::FeaturePyramid(int source_height, int source_width, std::vector<TapFeatures> taps)
    : source_height_(source_height), source_width_(source_width), taps_(std::move(taps)) {
  for (std::size_t i = 1; i < taps_.size(); ++i) {
    require(taps_[i - 1].index < taps_[i].index, ErrorCode::InvalidArgument,
            "pyramid taps must be strictly ordered");
  }
}

bool FeaturePyramid::has(int index) const noexcept {
  return std::any_of(taps_.begin(), taps_.end(), [&](const TapFeatures& t) { return t.index == index; });
}

const FeatureMap& FeaturePyramid::at(int index) const {
  for (const auto& t : taps_) {
    if (t.index == index) return t.map;
  }
  fail(ErrorCode::MissingTap, "pyramid has no tap " + std::to_string(index));
}

FeaturePyramid make_pyramid(std::vector<FeatureMap> maps) {
  require(!maps.empty(), ErrorCode::InvalidArgument, "pyramid needs at least one map");
  const int h = maps.front().height();
  const int w = maps.front().width();
  std::vector<TapFeatures> taps;
  int index = 1;
  for (auto& m : maps) taps.push_back({index++, std::move(m)});
  return FeaturePyramid(h, w, std::move(taps));
}

FeaturePyramid Encoder::encode(const Image& img, std::span<const int> taps) const {
  require(!img.empty(), ErrorCode::InvalidArgument, "cannot encode an empty image");
  const int min_side = min_input_side();
  if (std::min(img.height(), img.width()) < min_side) {
    fail(ErrorCode::InputTooSmall, std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                                       " is below the minimum side " + std::to_string(min_side));
  }
  const auto available = available_taps();
  std::vector<int> wanted(taps.begin(), taps.end());
  if (wanted.empty()) wanted = available;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  for (int t : wanted) {
    if (std::find(available.begin(), available.end(), t) == available.end()) {
      fail(ErrorCode::MissingTap, describe() + " does not provide tap " + std::to_string(t));
    }
  }
  return FeaturePyramid(img.height(), img.width(), run(img, wanted));
}

ModelManifest ModelManifest::from_json(std::string_view text) {
  ModelManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("outputs")) {
      const auto outputs = j.at("outputs").get<std::vector<std::string>>();
      if (outputs.size() != 5) fail(ErrorCode::ModelLoadError, "manifest must name exactly five outputs");
      std::copy(outputs.begin(), outputs.end(), m.outputs.begin());
    }
    if (j.contains("mean")) m.mean = j.at("mean").get<std::array<double, 3>>();
    if (j.contains("std")) m.std = j.at("std").get<std::array<double, 3>>();
    if (j.contains("input_range")) m.input_range = j.at("input_range").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ModelLoadError, std::string("invalid model manifest: ") + e.what());
  }
  if (m.input_range != "unit" && m.input_range != "byte") {
    fail(ErrorCode::ModelLoadError, "manifest input_range must be \"unit\" or \"byte\"");
  }
  for (double s : m.std) require(s > 0.0, ErrorCode::ModelLoadError, "manifest std must be positive");
  return m;
}

ModelManifest ModelManifest::for_model(const std::filesystem::path& model) {
  std::filesystem::path candidates[] = {model.string() + ".json", std::filesystem::path(model).replace_extension(".json")};
  for (const auto& p : candidates) {
    std::ifstream in(p);
    if (!in) continue;
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
  }
  return {};
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::InvalidArgument, "invalid " + std::string(what) + " in backend spec: " + std::string(text));
  }
  return value;
}

}  // namespace

std::shared_ptr<const Encoder> make_encoder(std::string_view backend, const std::filesystem::path& model_path) {
  if (backend == "pretrained") {
    std::filesystem::path path = model_path;
    if (path.empty()) {
      if (const char* env = std::getenv("PATTERNLENS_MODEL")) path = env;
    }
    if (path.empty()) {
      fail(ErrorCode::ModelLoadError, "pretrained backend needs --model or PATTERNLENS_MODEL");
    }
    return std::make_shared<OnnxEncoder>(path);
  }
  if (backend.starts_with("test:")) {
    std::vector<std::string_view> parts;
    std::string_view rest = backend.substr(5);
    while (true) {
      const auto pos = rest.find(':');
      parts.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest = rest.substr(pos + 1);
    }
    if (parts.size() < 2 || parts.size() > 3) {
      fail(ErrorCode::InvalidArgument, "test backend must be test:<seed>:<depth>[:<width>]");
    }
    const auto seed = parse_number<std::uint64_t>(parts[0], "seed");
    const auto depth = parse_number<int>(parts[1], "depth");
    const int width = parts.size() == 3 ? parse_number<int>(parts[2], "width") : TestEncoder::kDefaultWidth;
    return std::make_shared<TestEncoder>(seed, depth, width);
  }
  fail(ErrorCode::InvalidArgument, "unknown backend '" + std::string(backend) + "'");
}

}  // namespace patternlens
