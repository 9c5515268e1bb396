#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "patternlens/corpus.hpp"
#include "patternlens/losses.hpp"
#include "patternlens/metrics.hpp"
#include "patternlens/repeatability.hpp"

namespace patternlens {

using Json = nlohmann::ordered_json;

Json to_json(const RepeatabilityConfig& cfg);
Json to_json(const RepeatabilityReport& report);
Json to_json(const EvalReport& report);
Json to_json(const LossBreakdown& breakdown);
Json to_json(const LossWeights& weights);

RepeatabilityConfig config_from_json(const Json& j);
RepeatabilityReport repeatability_from_json(const Json& j);
EvalReport eval_from_json(const Json& j);

// Summary object: count, mean, std, min, max, histogram, skipped.
Json corpus_summary_json(const CorpusReport& report);
// One compact JSON object per line: {"path": ..., <repeatability report>}.
std::string corpus_records_jsonl(const CorpusReport& report);
// "path,alpha_style,s" header then one row per record.
std::string corpus_csv(const CorpusReport& report);

}  // namespace patternlens
