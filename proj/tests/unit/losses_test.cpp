#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "patternlens/error.hpp"
#include "patternlens/losses.hpp"

namespace patternlens {
namespace {

using testing::random_image;

const TestEncoder& encoder() {
  static const TestEncoder enc(11, 5);
  return enc;
}

Image solid(int side, double r, double g, double b) {
  Image img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      img.at(y, x, 0) = r;
      img.at(y, x, 1) = g;
      img.at(y, x, 2) = b;
    }
  }
  return img;
}

TEST(StyleLoss, IdentityIsZero) {
  const auto img = random_image(64, 64, 1);
  EXPECT_EQ(image_style_loss(img, img, encoder()), 0.0);
  EXPECT_EQ(image_style_loss(img, img, encoder(), true), 0.0);
  EXPECT_EQ(content_loss(img, img, encoder()), 0.0);
  EXPECT_EQ(identity_loss(img, img, encoder()), 0.0);
  EXPECT_EQ(patch_style_loss(img, img, 2, encoder()), 0.0);
}

TEST(StyleLoss, Symmetric) {
  const auto a = random_image(64, 64, 2);
  const auto b = random_image(64, 64, 3);
  EXPECT_DOUBLE_EQ(image_style_loss(a, b, encoder()), image_style_loss(b, a, encoder()));
  EXPECT_DOUBLE_EQ(content_loss(a, b, encoder()), content_loss(b, a, encoder()));
  EXPECT_DOUBLE_EQ(patch_style_loss(a, b, 2, encoder()), patch_style_loss(b, a, 2, encoder()));
}

TEST(StyleLoss, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto a = random_image(64, 48, seed);
    const auto b = random_image(64, 48, seed + 100);
    const auto fa = encoder().encode(a);
    const auto fb = encoder().encode(b);
    const std::vector<int> style{4, 5};
    const std::vector<int> ident{2, 3, 4, 5};
    const double g = testing::oracle::gram_loss(fa, fb, style, false);
    const double gc = testing::oracle::gram_loss(fa, fb, style, true);
    EXPECT_NEAR(image_style_loss(a, b, encoder()), g, 1e-9 * std::max(1.0, g));
    EXPECT_NEAR(image_style_loss(a, b, encoder(), true), gc, 1e-9 * std::max(1.0, gc));
    const double c = testing::oracle::feature_loss(fa, fb, style);
    const double i = testing::oracle::feature_loss(fa, fb, ident);
    EXPECT_NEAR(content_loss(a, b, encoder()), c, 1e-9 * std::max(1.0, c));
    EXPECT_NEAR(identity_loss(a, b, encoder()), i, 1e-9 * std::max(1.0, i));
  }
}

TEST(PatchStyleLoss, ScaleOneIsCenteredImageLoss) {
  const auto a = random_image(64, 64, 5);
  const auto b = random_image(64, 64, 6);
  EXPECT_NEAR(patch_style_loss(a, b, 1, encoder()), image_style_loss(a, b, encoder(), true), 1e-12);
}

TEST(PatchStyleLoss, MeanOverMatchedPatches) {
  const auto a = random_image(64, 64, 7);
  const auto b = random_image(64, 64, 8);
  const auto pa = patchify(a, 2);
  const auto pb = patchify(b, 2);
  double want = 0.0;
  for (std::size_t m = 0; m < 4; ++m) want += image_style_loss(pa[m], pb[m], encoder(), true);
  EXPECT_NEAR(patch_style_loss(a, b, 2, encoder()), want / 4.0, 1e-12);
}

TEST(PatchStyleLoss, PatchTooSmall) {
  const auto a = random_image(64, 64, 9);
  try {
    patch_style_loss(a, a, 3, encoder());  // 21 px < 32
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PatchTooSmall);
  }
  EXPECT_THROW(patch_style_loss(a, random_image(64, 60, 1), 1, encoder()), Error);
  EXPECT_THROW(patch_style_loss(a, a, 0, encoder()), Error);
}

TEST(ColorLoss, IdentityIsZero) {
  const auto img = random_image(32, 32, 10);
  EXPECT_EQ(color_loss(img, img), 0.0);
}

TEST(ColorLoss, DisjointSingleBinHistograms) {
  // Red vs green: channels R and G each put all mass in disjoint bins,
  // B matches. Distance = (1/sqrt2) * sqrt(2 + 2).
  EXPECT_NEAR(color_loss(solid(8, 1, 0, 0), solid(8, 0, 1, 0)), std::sqrt(2.0), 1e-12);
}

TEST(ColorLoss, BoundedAndSymmetric) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_image(16, 16, seed);
    const auto b = solid(16, 0.1 * seed, 0.5, 0.9);
    const double d = color_loss(a, b);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, std::sqrt(3.0) + 1e-12);
    EXPECT_DOUBLE_EQ(d, color_loss(b, a));
  }
  EXPECT_NEAR(color_loss(solid(4, 0, 0, 0), solid(4, 1, 1, 1)), std::sqrt(3.0), 1e-12);
}

TEST(ColorHistogram, ChannelsSumToOne) {
  const auto h = ColorHistogram::of(random_image(20, 13, 4));
  for (const auto& channel : h.bins) {
    double s = 0.0;
    for (double v : channel) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(TvLoss, ConstantIsZero) { EXPECT_EQ(tv_loss(solid(9, 0.3, 0.6, 0.2)), 0.0); }

TEST(TvLoss, VerticalStepEdge) {
  const int w = 10;
  const double delta = 0.4;
  Image img(6, w);
  for (int y = 0; y < 6; ++y) {
    for (int x = w / 2; x < w; ++x) {
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = delta;
    }
  }
  EXPECT_NEAR(tv_loss(img), delta / (w - 1), 1e-12);
}

TEST(LocalFeatureLoss, EqualReferenceIsZero) {
  const auto img = random_image(64, 64, 11);
  const auto refs = encoder().encode(img, kStyleTaps);
  EXPECT_EQ(local_feature_loss(img, refs.taps(), encoder()), 0.0);
}

TEST(LocalFeatureLoss, ZeroReferenceIsFeatureNorm) {
  const auto img = random_image(64, 64, 12);
  const auto feats = encoder().encode(img, kStyleTaps);
  std::vector<TapFeatures> refs;
  double want = 0.0;
  for (int tap : kStyleTaps) {
    const auto& m = feats.at(tap);
    refs.push_back({tap, FeatureMap(m.channels(), m.height(), m.width())});
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    want += std::sqrt(s);
  }
  EXPECT_NEAR(local_feature_loss(img, refs, encoder()), want, 1e-9 * want);
}

TEST(LocalFeatureLoss, ShapeMismatch) {
  const std::vector<TapFeatures> refs{{4, FeatureMap(1, 1, 1)}};
  try {
    local_feature_loss(random_image(64, 64, 1), refs, encoder());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(LossWeights, DefaultsAndOverrides) {
  LossWeights w;
  EXPECT_EQ(w.image, 10.0);
  EXPECT_EQ(w.lf, 100.0);
  EXPECT_EQ(w.patch, 0.5);
  w.apply_overrides("image=2.5,tv=0");
  EXPECT_EQ(w.image, 2.5);
  EXPECT_EQ(w.tv, 0.0);
  EXPECT_THROW(w.apply_overrides("bogus=1"), Error);
  EXPECT_THROW(w.apply_overrides("image"), Error);
  EXPECT_THROW(w.apply_overrides("image=abc"), Error);
  EXPECT_THROW(w.apply_overrides("image=-1"), Error);
}

TEST(TotalLoss, ConstantTripleIsAllZero) {
  // A flat gray image has alpha = 1 and therefore patch scale 8, so it must
  // be large enough for 8x8 patches to stay above the encoder minimum.
  const auto gray = solid(256, 0.5, 0.5, 0.5);
  const auto refs = encoder().encode(gray, kStyleTaps);
  const auto out = total_style_loss(gray, gray, gray, refs.taps(), LossWeights{}, encoder(), RepeatabilityConfig{});
  EXPECT_EQ(out.patch_scale, 8);
  EXPECT_EQ(out.image, 0.0);
  EXPECT_EQ(out.patch, 0.0);
  ASSERT_TRUE(out.lf);
  EXPECT_EQ(*out.lf, 0.0);
  EXPECT_EQ(out.content, 0.0);
  EXPECT_EQ(out.color, 0.0);
  EXPECT_EQ(out.tv, 0.0);
  EXPECT_EQ(out.total, 0.0);
}

class TotalLossWeights : public ::testing::Test {
 protected:
  void SetUp() override {
    content = random_image(256, 256, 20);
    style = testing::tile_image(random_image(128, 128, 21), 2);
    stylized = random_image(256, 256, 22);
    cfg.taps = {1, 2, 3};
  }
  LossBreakdown run(const LossWeights& w) {
    return total_style_loss(content, style, stylized, {}, w, encoder(), cfg);
  }
  Image content, style, stylized;
  RepeatabilityConfig cfg;
};

TEST_F(TotalLossWeights, TotalIsWeightedSum) {
  const auto out = run(LossWeights{});
  EXPECT_FALSE(out.lf);
  EXPECT_NEAR(out.total, 10 * out.image + 0.5 * out.patch + out.content + out.color + out.tv, 1e-9 * out.total);
}

TEST_F(TotalLossWeights, AllZeroWeightsGiveZero) {
  LossWeights w;
  w.apply_overrides("identity=0,content=0,image=0,lf=0,patch=0,color=0,tv=0");
  EXPECT_EQ(run(w).total, 0.0);
}

TEST_F(TotalLossWeights, DoublingOneWeightAddsItsTerm) {
  const auto base = run(LossWeights{});
  LossWeights w;
  w.image = 20.0;
  const auto doubled = run(w);
  EXPECT_NEAR(doubled.total - base.total, 10.0 * base.image, 1e-9 * base.total);
}

TEST_F(TotalLossWeights, LinearInWeights) {
  LossWeights a;
  a.apply_overrides("image=1,patch=2,content=3,color=4,tv=5");
  LossWeights b;
  b.apply_overrides("image=7,patch=0,content=1,color=2,tv=0.5");
  LossWeights sum;
  sum.apply_overrides("image=8,patch=2,content=4,color=6,tv=5.5");
  EXPECT_NEAR(run(sum).total, run(a).total + run(b).total, 1e-9 * run(sum).total);
}

}  // namespace
}  // namespace patternlens
