#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "fixtures.hpp"
#include "patternlens/image_ops.hpp"

namespace patternlens {
namespace {

using nlohmann::json;
using testing::random_image;
using testing::read_file;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kBackend = "--backend=test:7:3";
// The style and content losses read taps 4 and 5.
const std::string kDeep = "--backend=test:7:5";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    save_image(random_image(64, 64, 1), dir.path() / "content.png");
    save_image(testing::tile_image(random_image(32, 32, 2), 2), dir.path() / "style.png");
    save_image(random_image(64, 64, 3), dir.path() / "stylized.png");
  }
  std::string path(const std::string& name) const { return (dir.path() / name).string(); }

  TempDir dir;
};

TEST_F(CliTest, AlphaPrintsReport) {
  const auto r = run({"alpha", path("style.png"), kBackend, "--size=64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_GE(j["alpha_style"].get<double>(), 0.0);
  EXPECT_LE(j["alpha_style"].get<double>(), 1.0);
  EXPECT_EQ(j["config"]["r"], 2);
  EXPECT_EQ(j["config"]["taps"], json({1, 2, 3}));
  EXPECT_EQ(j["config"]["backend"], "test:7:3:8");
}

TEST_F(CliTest, AlphaHonorsFlags) {
  const auto r = run({"alpha", path("style.png"), kBackend, "--size=64", "-r", "4", "-p", "0.5", "--seed", "3",
                      "--taps", "1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["config"]["r"], 4);
  EXPECT_EQ(j["config"]["p"], 0.5);
  EXPECT_EQ(j["config"]["seed"], 3);
  EXPECT_EQ(j["config"]["taps"], json({1, 2}));
}

TEST_F(CliTest, AlphaCsvToFile) {
  const auto r = run({"alpha", path("style.png"), kBackend, "--format=csv", "-o", path("a.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_file(path("a.csv")).rfind("path,alpha_style,s\n", 0), 0u);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"alpha"}).code, 1);
  EXPECT_EQ(run({"alpha", path("style.png"), kBackend, "-r", "1"}).code, 1);
  EXPECT_EQ(run({"alpha", path("style.png"), kBackend, "-p", "0"}).code, 1);
  EXPECT_EQ(run({"alpha", path("style.png"), "--backend=bogus"}).code, 1);
  EXPECT_EQ(run({"alpha", path("style.png"), "--backend=test:x:3"}).code, 1);
  EXPECT_EQ(run({"eval", path("content.png"), kBackend}).code, 1);
  EXPECT_EQ(run({"losses", path("content.png"), path("style.png"), path("stylized.png"), kBackend,
                 "--weights", "nope=1"})
                .code,
            1);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("corpus"), std::string::npos);
}

TEST_F(CliTest, IoAndModelErrorsExitTwo) {
  EXPECT_EQ(run({"alpha", path("missing.png"), kBackend}).code, 2);
  const auto r = run({"alpha", path("style.png"), "--backend=pretrained", "--model", path("missing.onnx")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ComputationErrorsExitThree) {
  // Depth 3 needs 8 px; every tap is smaller than a 16-patch grid here.
  EXPECT_EQ(run({"alpha", path("style.png"), kBackend, "--size=8", "-r", "16"}).code, 3);
  std::filesystem::create_directories(path("empty"));
  EXPECT_EQ(run({"corpus", path("empty"), kBackend}).code, 3);
}

TEST_F(CliTest, EvalTriple) {
  const auto r = run({"eval", path("content.png"), path("style.png"), path("stylized.png"), kDeep, "--size=64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  for (const char* key : {"content_fidelity", "style_loss_5crop", "pattern_difference", "alpha_style"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST_F(CliTest, EvalIdentityTriple) {
  const auto r = run({"eval", path("style.png"), path("style.png"), path("style.png"), kDeep, "--size=64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["content_fidelity"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["style_loss_5crop"].get<double>(), 0.0);
  EXPECT_EQ(j["pattern_difference"].get<double>(), 0.0);
}

TEST_F(CliTest, EvalManifestRecordsBadLines) {
  std::ofstream(path("m.jsonl")) << R"({"content":"content.png","style":"style.png","stylized":"stylized.png"})"
                                 << "\n\n"
                                 << R"({"content":"nope.png","style":"style.png","stylized":"stylized.png"})"
                                 << "\nnot json\n";
  const auto r = run({"eval", "--manifest", path("m.jsonl"), kDeep, "--size=64"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::vector<json> records;
  for (std::string line; std::getline(lines, line);) records.push_back(json::parse(line));
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0]["line"], 1);
  EXPECT_TRUE(records[0].contains("content_fidelity"));
  EXPECT_EQ(records[1]["line"], 3);
  EXPECT_TRUE(records[1].contains("error"));
  EXPECT_EQ(records[2]["line"], 4);
  EXPECT_TRUE(records[2].contains("error"));
}

TEST_F(CliTest, EvalManifestAllFailing) {
  std::ofstream(path("m.jsonl")) << R"({"content":"a.png","style":"b.png","stylized":"c.png"})" << "\n";
  EXPECT_EQ(run({"eval", "--manifest", path("m.jsonl"), kBackend}).code, 2);
}

TEST_F(CliTest, LossesBreakdown) {
  const auto r = run({"losses", path("content.png"), path("style.png"), path("stylized.png"),
                      kDeep, "--size=256"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["lf"].is_null());
  const double total = 10 * j["image"].get<double>() + 0.5 * j["patch"].get<double>() +
                       j["content"].get<double>() + j["color"].get<double>() + j["tv"].get<double>();
  EXPECT_NEAR(j["total"].get<double>(), total, 1e-9 * total);
}

TEST_F(CliTest, LossesWeightsAndAttentionReferences) {
  const auto r = run({"losses", path("content.png"), path("style.png"), path("stylized.png"),
                      kDeep, "--size=256", "--weights", "image=0,patch=0,content=0,color=0,tv=0,lf=1",
                      "--lf-refs", "attention"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_TRUE(j["lf"].is_number());
  EXPECT_DOUBLE_EQ(j["total"].get<double>(), j["lf"].get<double>());
}

TEST_F(CliTest, CorpusOutputIndependentOfWorkers) {
  for (int i = 0; i < 10; ++i) {
    save_image(random_image(40 + 3 * i, 64, 50 + i), dir.path() / ("c" + std::to_string(i) + ".png"));
  }
  std::ofstream(path("broken.jpg")) << "junk";
  const auto one = run({"corpus", dir.path().string(), kBackend, "--size=64", "--workers=1", "-p", "0.5", "--out",
                        path("out1"), "--format=csv"});
  const auto many = run({"corpus", dir.path().string(), kBackend, "--size=64", "--workers=8", "-p", "0.5", "--out",
                         path("out8"), "--format=csv"});
  ASSERT_EQ(one.code, 0) << one.err;
  ASSERT_EQ(many.code, 0) << many.err;
  EXPECT_EQ(one.out, many.out);
  EXPECT_EQ(one.err, many.err);
  for (const char* f : {"summary.json", "records.jsonl", "alpha.csv"}) {
    EXPECT_EQ(read_file(dir.path() / "out1" / f), read_file(dir.path() / "out8" / f))
        << f;
  }
  const auto summary = json::parse(read_file(dir.path() / "out1" / "summary.json"));
  EXPECT_EQ(summary["count"], 13);
  EXPECT_EQ(summary["skipped"].size(), 1u);
  EXPECT_NE(one.err.find("histogram"), std::string::npos);
}

}  // namespace
}  // namespace patternlens
