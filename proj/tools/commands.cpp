#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "patternlens/corpus.hpp"
#include "patternlens/error.hpp"
#include "patternlens/image_ops.hpp"
#include "patternlens/losses.hpp"
#include "patternlens/metrics.hpp"
#include "patternlens/serialize.hpp"
#include "patternlens/transforms.hpp"

namespace fs = std::filesystem;

namespace patternlens::cli {
namespace {

struct CommonFlags {
  std::string backend = "pretrained";
  std::string model;
  int ratio = 2;
  double probability = 1.0;
  std::uint64_t seed = 0;
  std::vector<int> taps;
  bool no_resize = false;
  int size = 256;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("--backend", f.backend, "pretrained | test:<seed>:<depth>[:<width>]")->capture_default_str();
  cmd.add_option("--model", f.model, "ONNX model file (default: $PATTERNLENS_MODEL)");
  cmd.add_option("-r,--ratio", f.ratio, "patch grid ratio r")->capture_default_str();
  cmd.add_option("-p,--pair-probability", f.probability, "inter-patch pair sampling probability")
      ->capture_default_str();
  cmd.add_option("--seed", f.seed, "pair sampling seed")->capture_default_str();
  cmd.add_option("--taps", f.taps, "encoder taps (default: all)")->delimiter(',');
  cmd.add_flag("--no-resize", f.no_resize, "analyze images at their native size");
  cmd.add_option("--size", f.size, "square resize target")->capture_default_str()->check(CLI::PositiveNumber);
}

RepeatabilityConfig make_config(const CommonFlags& f) {
  RepeatabilityConfig cfg;
  cfg.ratio = f.ratio;
  cfg.pair_probability = f.probability;
  cfg.seed = f.seed;
  cfg.taps = f.taps;
  cfg.validate();
  return cfg;
}

// Cheap syntactic check so usage errors surface before a model is parsed.
void check_backend_syntax(const std::string& backend) {
  if (backend != "pretrained" && !backend.starts_with("test:")) {
    fail(ErrorCode::InvalidArgument, "unknown backend '" + backend + "'");
  }
}

Image prepare(const fs::path& path, const CommonFlags& f) {
  Image img = load_image(path);
  return f.no_resize ? img : resize(img, f.size, f.size);
}

Json with_backend(Json config, const Encoder& encoder) {
  config["backend"] = encoder.describe();
  return config;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DomainError:
      return kUsage;
    case ErrorCode::ModelLoadError:
    case ErrorCode::IoError:
      return kModelOrIo;
    default:
      return kComputation;
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

// Writes to `path` when given, otherwise to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

// --- alpha ---------------------------------------------------------------

struct AlphaArgs {
  CommonFlags common;
  std::string image;
  std::string output;
  std::string format = "json";
};

int cmd_alpha(const AlphaArgs& a, std::ostream& out) {
  const auto cfg = make_config(a.common);
  check_backend_syntax(a.common.backend);
  const auto encoder = make_encoder(a.common.backend, a.common.model);
  const Image img = prepare(a.image, a.common);
  const auto report = pattern_repeatability(img, *encoder, cfg);

  if (a.format == "csv") {
    CorpusRecord rec{fs::path(a.image).generic_string(), report};
    CorpusReport single;
    single.records.push_back(rec);
    emit(corpus_csv(single), a.output, out);
  } else {
    Json j = to_json(report);
    j["config"] = with_backend(j["config"], *encoder);
    emit(j.dump(2) + "\n", a.output, out);
  }
  return kOk;
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  CommonFlags common;
  std::vector<std::string> images;
  std::string manifest;
  std::string output;
};

Json eval_one(const fs::path& content, const fs::path& style, const fs::path& stylized, const Encoder& encoder,
              const CommonFlags& f, const RepeatabilityConfig& cfg) {
  const Image c = prepare(content, f);
  const Image s = prepare(style, f);
  const Image t = prepare(stylized, f);
  Json j = to_json(evaluate_triple(c, s, t, encoder, cfg));
  j["config"] = with_backend(j["config"], encoder);
  return j;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = make_config(a.common);
  check_backend_syntax(a.common.backend);
  if (a.manifest.empty() == (a.images.size() != 3)) {
    fail(ErrorCode::InvalidArgument, "eval takes either <content> <style> <stylized> or --manifest");
  }
  if (!a.manifest.empty() && !fs::is_regular_file(a.manifest)) {
    fail(ErrorCode::IoError, "manifest not found: " + a.manifest);
  }
  const auto encoder = make_encoder(a.common.backend, a.common.model);

  if (a.manifest.empty()) {
    emit(eval_one(a.images[0], a.images[1], a.images[2], *encoder, a.common, cfg).dump(2) + "\n", a.output, out);
    return kOk;
  }

  std::ifstream in(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  std::ostringstream lines;
  std::string line;
  std::size_t line_no = 0;
  std::size_t total = 0;
  std::size_t failed = 0;
  int last_failure = kComputation;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++total;
    Json record;
    try {
      const auto entry = Json::parse(line);
      record = eval_one(resolve(entry.at("content").get<std::string>()), resolve(entry.at("style").get<std::string>()),
                        resolve(entry.at("stylized").get<std::string>()), *encoder, a.common, cfg);
      record["line"] = line_no;
    } catch (const Error& e) {
      ++failed;
      last_failure = exit_code_for(e.code());
      record = Json{{"line", line_no}, {"error", e.what()}};
    } catch (const std::exception& e) {
      ++failed;
      last_failure = kUsage;
      record = Json{{"line", line_no}, {"error", e.what()}};
    }
    if (record.contains("error")) err << "line " << line_no << ": " << record["error"].get<std::string>() << "\n";
    lines << record.dump() << "\n";
  }
  emit(lines.str(), a.output, out);
  if (total == 0) fail(ErrorCode::InvalidArgument, "manifest has no entries");
  return failed == total ? last_failure : kOk;
}

// --- losses --------------------------------------------------------------

struct LossArgs {
  CommonFlags common;
  std::vector<std::string> images;
  std::string weights;
  std::string lf_refs = "none";
  std::string output;
};

int cmd_losses(const LossArgs& a, std::ostream& out) {
  const auto cfg = make_config(a.common);
  check_backend_syntax(a.common.backend);
  LossWeights weights;
  weights.apply_overrides(a.weights);
  if (a.lf_refs != "none" && a.lf_refs != "attention") {
    fail(ErrorCode::InvalidArgument, "--lf-refs must be none or attention");
  }
  const auto encoder = make_encoder(a.common.backend, a.common.model);
  const Image content = prepare(a.images[0], a.common);
  const Image style = prepare(a.images[1], a.common);
  const Image stylized = prepare(a.images[2], a.common);

  std::vector<TapFeatures> refs;
  if (a.lf_refs == "attention") {
    const auto cp = encoder->encode(content);
    const auto sp = encoder->encode(style);
    for (int tap : kStyleTaps) refs.push_back({tap, attention_transfer(cp, sp, tap)});
  }
  const auto breakdown = total_style_loss(content, style, stylized, refs, weights, *encoder, cfg);
  emit(to_json(breakdown).dump(2) + "\n", a.output, out);
  return kOk;
}

// --- corpus --------------------------------------------------------------

struct CorpusArgs {
  CommonFlags common;
  std::string dir;
  int workers = 1;
  std::string out_dir;
  std::string format = "json";
};

void print_histogram(const CorpusReport& r, std::ostream& err) {
  err << "alpha_style histogram (" << r.count << " images)\n";
  for (std::size_t k = 0; k < r.histogram.size(); ++k) {
    err << "  [" << k / 10.0 << ", " << (k + 1) / 10.0 << (k + 1 == r.histogram.size() ? "]" : ")") << "  "
        << r.histogram[k] << "\n";
  }
  err << "mean " << r.mean << "  std " << r.stddev << "  min " << r.min << "  max " << r.max << "\n";
  err << "WikiArt reference: mean 0.79  std 0.1  min 0.26  max 0.97\n";
  if (!r.skipped.empty()) err << r.skipped.size() << " file(s) skipped\n";
}

int cmd_corpus(const CorpusArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = make_config(a.common);
  check_backend_syntax(a.common.backend);
  if (a.workers < 1) fail(ErrorCode::InvalidArgument, "--workers must be >= 1");
  if (!fs::is_directory(a.dir)) fail(ErrorCode::IoError, "not a directory: " + a.dir);
  const auto encoder = make_encoder(a.common.backend, a.common.model);

  CorpusOptions options;
  options.workers = a.workers;
  options.resize = !a.common.no_resize;
  options.size = a.common.size;
  const auto report = analyze_corpus(a.dir, *encoder, cfg, options);

  Json summary = corpus_summary_json(report);
  Json config = to_json(cfg);
  config["taps"] = report.records.front().report.config.taps;
  summary["config"] = with_backend(config, *encoder);
  const std::string summary_text = summary.dump(2) + "\n";

  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    write_file(fs::path(a.out_dir) / "summary.json", summary_text);
    write_file(fs::path(a.out_dir) / "records.jsonl", corpus_records_jsonl(report));
    if (a.format == "csv") write_file(fs::path(a.out_dir) / "alpha.csv", corpus_csv(report));
  }
  out << (a.format == "csv" && a.out_dir.empty() ? corpus_csv(report) : summary_text);
  print_histogram(report, err);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern repeatability analysis and style-transfer evaluation"};
  app.name("patternlens");
  app.require_subcommand(1);

  AlphaArgs alpha;
  auto* alpha_cmd = app.add_subcommand("alpha", "pattern repeatability of one image");
  alpha_cmd->add_option("image", alpha.image, "image file")->required();
  alpha_cmd->add_option("-o,--output", alpha.output, "write the report to a file instead of stdout");
  alpha_cmd->add_option("--format", alpha.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_common(*alpha_cmd, alpha.common);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "content fidelity, five-crop style loss and pattern difference");
  eval_cmd->add_option("images", eval.images, "<content> <style> <stylized>");
  eval_cmd->add_option("--manifest", eval.manifest, "JSONL file of {content, style, stylized} triples");
  eval_cmd->add_option("-o,--output", eval.output, "write results to a file instead of stdout");
  add_common(*eval_cmd, eval.common);

  LossArgs losses;
  auto* losses_cmd = app.add_subcommand("losses", "stylization loss breakdown");
  losses_cmd->add_option("images", losses.images, "<content> <style> <stylized>")->required()->expected(3);
  losses_cmd->add_option("--weights", losses.weights, "overrides, e.g. patch=0,tv=2");
  losses_cmd->add_option("--lf-refs", losses.lf_refs, "local feature references: none | attention")
      ->capture_default_str();
  losses_cmd->add_option("-o,--output", losses.output, "write the breakdown to a file instead of stdout");
  add_common(*losses_cmd, losses.common);

  CorpusArgs corpus;
  auto* corpus_cmd = app.add_subcommand("corpus", "pattern repeatability statistics over a directory");
  corpus_cmd->add_option("dir", corpus.dir, "image directory")->required();
  corpus_cmd->add_option("--workers", corpus.workers, "parallel workers")->capture_default_str();
  corpus_cmd->add_option("--out", corpus.out_dir, "directory for summary.json, records.jsonl and alpha.csv");
  corpus_cmd->add_option("--format", corpus.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_common(*corpus_cmd, corpus.common);

  std::vector<std::string> storage{"patternlens"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    if (*alpha_cmd) return cmd_alpha(alpha, out);
    if (*eval_cmd) return cmd_eval(eval, out, err);
    if (*losses_cmd) return cmd_losses(losses, out);
    if (*corpus_cmd) return cmd_corpus(corpus, out, err);
  } catch (const Error& e) {
    err << "patternlens: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "patternlens: " << e.what() << "\n";
    return kComputation;
  }
  return kUsage;
}

}  // namespace patternlens::cli
