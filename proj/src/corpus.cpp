#include "patternlens/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <optional>
#include <thread>

#include "patternlens/error.hpp"
#include "patternlens/image_ops.hpp"

namespace patternlens {
namespace {

bool has_image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

struct Outcome {
  std::optional<RepeatabilityReport> report;
  std::string error;
};

}  // namespace

std::vector<std::filesystem::path> list_corpus_images(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) fail(ErrorCode::IoError, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && has_image_extension(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

CorpusReport summarize(std::vector<CorpusRecord> records, std::vector<SkippedFile> skipped) {
  if (records.empty()) fail(ErrorCode::EmptyCorpus, "no image in the corpus could be analyzed");
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  std::sort(skipped.begin(), skipped.end(), [](const auto& a, const auto& b) { return a.path < b.path; });

  CorpusReport out;
  out.count = records.size();
  out.min = records.front().report.alpha_style;
  out.max = out.min;
  double sum = 0.0;
  for (const auto& r : records) {
    const double a = r.report.alpha_style;
    sum += a;
    out.min = std::min(out.min, a);
    out.max = std::max(out.max, a);
    const int bin = std::clamp(static_cast<int>(std::floor(a * 10.0)), 0, 9);
    ++out.histogram[bin];
  }
  out.mean = sum / static_cast<double>(out.count);
  // Summation rounding can push the mean a hair outside [min, max].
  out.mean = std::clamp(out.mean, out.min, out.max);
  double sq = 0.0;
  for (const auto& r : records) sq += (r.report.alpha_style - out.mean) * (r.report.alpha_style - out.mean);
  out.stddev = std::sqrt(sq / static_cast<double>(out.count));
  out.records = std::move(records);
  out.skipped = std::move(skipped);
  return out;
}

CorpusReport analyze_corpus(const std::filesystem::path& dir, const Encoder& encoder, const RepeatabilityConfig& cfg,
                            const CorpusOptions& options) {
  cfg.validate();
  require(options.workers >= 1, ErrorCode::InvalidArgument, "workers must be >= 1");
  require(options.size >= 1, ErrorCode::InvalidArgument, "resize target must be >= 1");
  const auto files = list_corpus_images(dir);
  if (files.empty()) fail(ErrorCode::EmptyCorpus, "no image files under " + dir.string());

  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        Image img = load_image(files[i]);
        if (options.resize) img = resize(img, options.size, options.size);
        outcomes[i].report = pattern_repeatability(img, encoder, cfg);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(options.workers, files.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  std::vector<CorpusRecord> records;
  std::vector<SkippedFile> skipped;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string rel = files[i].lexically_relative(dir).generic_string();
    if (outcomes[i].report) {
      records.push_back({rel, std::move(*outcomes[i].report)});
    } else {
      skipped.push_back({rel, outcomes[i].error});
    }
  }
  return summarize(std::move(records), std::move(skipped));
}

}  // namespace patternlens
