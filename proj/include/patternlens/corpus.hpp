#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "patternlens/repeatability.hpp"

namespace patternlens {

struct CorpusRecord {
  std::string path;  // relative to the corpus root, '/' separated
  RepeatabilityReport report;
};

struct SkippedFile {
  std::string path;
  std::string reason;
};

struct CorpusReport {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  std::array<std::size_t, 10> histogram{};  // bins of width 0.1 over [0, 1]
  std::vector<CorpusRecord> records;        // sorted by path
  std::vector<SkippedFile> skipped;         // sorted by path
};

struct CorpusOptions {
  int workers = 1;
  bool resize = true;
  int size = 256;
};

// Image files under `dir` (recursively): .png, .jpg, .jpeg, any case.
std::vector<std::filesystem::path> list_corpus_images(const std::filesystem::path& dir);

// Pattern repeatability of every image under `dir`. Files that fail to load
// or evaluate are recorded in `skipped`. Aggregates are computed over the
// path-sorted records, so the result does not depend on `workers`.
// Throws EmptyCorpus when no image could be analyzed, IoError when `dir` is
// not a directory.
CorpusReport analyze_corpus(const std::filesystem::path& dir, const Encoder& encoder, const RepeatabilityConfig& cfg,
                            const CorpusOptions& options = {});

// Summary statistics for already computed records.
CorpusReport summarize(std::vector<CorpusRecord> records, std::vector<SkippedFile> skipped);

}  // namespace patternlens
