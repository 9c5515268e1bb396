#include "patternlens/serialize.hpp"

#include <sstream>

#include "patternlens/error.hpp"

namespace patternlens {

Json to_json(const RepeatabilityConfig& cfg) {
  return Json{{"r", cfg.ratio}, {"p", cfg.pair_probability}, {"seed", cfg.seed}, {"taps", cfg.taps}};
}

Json to_json(const RepeatabilityReport& r) {
  return Json{{"alpha_intra_rgb", r.alpha_intra_rgb},
              {"alpha_inter_rgb", r.alpha_inter_rgb},
              {"alpha_intra_gray", r.alpha_intra_gray},
              {"alpha_inter_gray", r.alpha_inter_gray},
              {"alpha_style", r.alpha_style},
              {"patch_scale", r.patch_scale},
              {"config", to_json(r.config)}};
}

Json to_json(const EvalReport& r) {
  return Json{{"content_fidelity", r.content_fidelity},
              {"style_loss_5crop", r.style_loss_5crop},
              {"pattern_difference", r.pattern_difference},
              {"alpha_style", r.alpha_style},
              {"alpha_stylized", r.alpha_stylized},
              {"config", to_json(r.config)}};
}

Json to_json(const LossBreakdown& b) {
  Json j{{"image", b.image}, {"patch", b.patch}};
  j["lf"] = b.lf ? Json(*b.lf) : Json(nullptr);
  j["content"] = b.content;
  j["color"] = b.color;
  j["tv"] = b.tv;
  j["total"] = b.total;
  return j;
}

Json to_json(const LossWeights& w) {
  return Json{{"identity", w.identity}, {"cx", w.cx},     {"content", w.content},
              {"image", w.image},       {"lf", w.lf},     {"patch", w.patch},
              {"color", w.color},       {"adv", w.adv},   {"tv", w.tv}};
}

RepeatabilityConfig config_from_json(const Json& j) {
  RepeatabilityConfig cfg;
  cfg.ratio = j.at("r").get<int>();
  cfg.pair_probability = j.at("p").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.taps = j.at("taps").get<std::vector<int>>();
  return cfg;
}

RepeatabilityReport repeatability_from_json(const Json& j) {
  RepeatabilityReport r;
  r.alpha_intra_rgb = j.at("alpha_intra_rgb").get<double>();
  r.alpha_inter_rgb = j.at("alpha_inter_rgb").get<double>();
  r.alpha_intra_gray = j.at("alpha_intra_gray").get<double>();
  r.alpha_inter_gray = j.at("alpha_inter_gray").get<double>();
  r.alpha_style = j.at("alpha_style").get<double>();
  r.patch_scale = j.at("patch_scale").get<int>();
  r.config = config_from_json(j.at("config"));
  return r;
}

EvalReport eval_from_json(const Json& j) {
  EvalReport r;
  r.content_fidelity = j.at("content_fidelity").get<double>();
  r.style_loss_5crop = j.at("style_loss_5crop").get<double>();
  r.pattern_difference = j.at("pattern_difference").get<double>();
  r.alpha_style = j.at("alpha_style").get<double>();
  r.alpha_stylized = j.at("alpha_stylized").get<double>();
  r.config = config_from_json(j.at("config"));
  return r;
}

Json corpus_summary_json(const CorpusReport& report) {
  Json bins = Json::array();
  for (std::size_t k = 0; k < report.histogram.size(); ++k) {
    bins.push_back(Json{{"lo", static_cast<double>(k) / 10.0},
                        {"hi", static_cast<double>(k + 1) / 10.0},
                        {"count", report.histogram[k]}});
  }
  Json skipped = Json::array();
  for (const auto& s : report.skipped) skipped.push_back(Json{{"path", s.path}, {"reason", s.reason}});
  return Json{{"count", report.count}, {"mean", report.mean}, {"std", report.stddev}, {"min", report.min},
              {"max", report.max},     {"histogram", bins},   {"skipped", skipped}};
}

std::string corpus_records_jsonl(const CorpusReport& report) {
  std::ostringstream out;
  for (const auto& rec : report.records) {
    Json line{{"path", rec.path}};
    const Json fields = to_json(rec.report);
    for (const auto& [key, value] : fields.items()) line[key] = value;
    out << line.dump() << '\n';
  }
  return out.str();
}

std::string corpus_csv(const CorpusReport& report) {
  std::ostringstream out;
  out << "path,alpha_style,s\n";
  for (const auto& rec : report.records) {
    std::string path = rec.path;
    if (path.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : path) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      path = quoted + "\"";
    }
    out << path << ',' << Json(rec.report.alpha_style).dump() << ',' << rec.report.patch_scale << '\n';
  }
  return out.str();
}

}  // namespace patternlens
