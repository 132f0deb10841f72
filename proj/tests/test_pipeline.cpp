#include <gtest/gtest.h>

#include "camhealth/error.hpp"
#include "camhealth/pipeline.hpp"
#include "camhealth/scene.hpp"
#include "camhealth/serialize.hpp"

using namespace camhealth;

namespace {

const GrayImage& texture() {
  static const GrayImage img = spectral_texture(256, 256, 1.3, 110, 22, 99);
  return img;
}

}  // namespace

TEST(CorruptPipeline, DefocusOnly) {
  const CorruptionResult r = corrupt_pipeline(texture(), parse_recipe("defocus:7", 1));
  ASSERT_EQ(r.truth.blurs.size(), 1u);
  EXPECT_EQ(r.truth.combined_mtf(), kernel_mtf(defocus_kernel(7)));
  EXPECT_TRUE(r.truth.noises.empty());
  EXPECT_EQ(r.truth.total_sigma(), 0.0);
}

TEST(CorruptPipeline, PhotonThenMotionRecordsPreBlur) {
  const CorruptionResult r = corrupt_pipeline(texture(), parse_recipe("photon:10 > lin-motion:3", 2));
  ASSERT_EQ(r.truth.noises.size(), 1u);
  EXPECT_NEAR(r.truth.noises[0].sigma, 10.0, 1e-9);
  EXPECT_EQ(r.truth.noises[0].position, NoisePosition::kPreBlur);
  EXPECT_EQ(r.truth.combined_mtf(), kernel_mtf(linear_motion_kernel(3, 0)));
}

TEST(CorruptPipeline, TwoBlursAroundNoise) {
  const CorruptionResult r = corrupt_pipeline(texture(), parse_recipe("lin-motion:3@90 > dcsn:10 > lin-motion:7", 3));
  ASSERT_EQ(r.truth.blurs.size(), 2u);
  ASSERT_EQ(r.truth.noises.size(), 1u);
  EXPECT_EQ(r.truth.noises[0].position, NoisePosition::kBetweenBlur);
  EXPECT_NEAR(r.truth.noises[0].sigma, 10.0, 1e-9);
  const MtfSamples want = kernel_mtf(linear_motion_kernel(3, 90)) * kernel_mtf(linear_motion_kernel(7, 0));
  const MtfSamples got = r.truth.combined_mtf();
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    EXPECT_NEAR(got.h[i], want.h[i], 1e-15);
    EXPECT_NEAR(got.v[i], want.v[i], 1e-15);
  }
}

TEST(CorruptPipeline, PostBlurNoiseAndRealizedSigma) {
  for (const char* kind : {"dcsn", "readout", "sensor", "combined"}) {
    const CorruptionResult r = corrupt_pipeline(texture(), parse_recipe(std::string(kind) + ":15", 4));
    ASSERT_EQ(r.truth.noises.size(), 1u) << kind;
    EXPECT_NEAR(r.truth.noises[0].sigma, 15.0, 1e-9) << kind;
  }
  const CorruptionResult r = corrupt_pipeline(texture(), parse_recipe("defocus:3 > sensor:5", 4));
  EXPECT_EQ(r.truth.noises[0].position, NoisePosition::kPostBlur);
}

TEST(CorruptPipeline, DeterministicPerSeed) {
  const std::string recipe = "photon:10 > nonlin-motion:11 > sensor:5";
  const CorruptionResult a = corrupt_pipeline(texture(), parse_recipe(recipe, 17));
  const CorruptionResult b = corrupt_pipeline(texture(), parse_recipe(recipe, 17));
  const CorruptionResult c = corrupt_pipeline(texture(), parse_recipe(recipe, 18));
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(to_json(a.truth).dump(), to_json(b.truth).dump());
  EXPECT_NE(a.image, c.image);
}

TEST(ParseRecipe, Errors) {
  EXPECT_THROW(parse_recipe("defocus:4", 0), InvalidArgument);
  EXPECT_THROW(parse_recipe("blur:3", 0), InvalidArgument);
  EXPECT_THROW(parse_recipe("dcsn:10 > photon:10", 0), InvalidArgument);
  EXPECT_THROW(parse_recipe("dcsn:45", 0), InvalidArgument);
  EXPECT_THROW(parse_recipe("lin-motion:x", 0), InvalidArgument);
  EXPECT_THROW(parse_recipe("", 0), InvalidArgument);
}

TEST(Serialize, BundleRoundTrip) {
  const CorruptionResult r = corrupt_pipeline(texture(), parse_recipe("photon:10 > nonlin-motion:7 > dcsn:5", 5));
  const Json j = to_json(r.truth);
  const GroundTruthBundle back = bundle_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(back.combined_mtf(), r.truth.combined_mtf());
  EXPECT_THROW(bundle_from_json(Json::parse(R"({"blurs": 3})")), DataError);
}

TEST(Serialize, KernelRoundTrip) {
  const Kernel k = nonlinear_motion_kernel(11, 3);
  const Kernel back = kernel_from_json(Json::parse(to_json(k).dump()));
  EXPECT_EQ(back.weights(), k.weights());
  EXPECT_EQ(back.info().seed, k.info().seed);
}
