#include <gtest/gtest.h>

#include "camhealth/error.hpp"
#include "camhealth/experiments.hpp"
#include "camhealth/iopc.hpp"

using namespace camhealth;

namespace {

Iopc filled(double ap_of(double, double)) {
  Iopc c({0, 10, 20}, {0.5, 0.75, 1.0});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) c.set_cell(i, j, ap_of(c.sigma_grid()[i], c.mtf_grid()[j]), 1);
  }
  return c;
}

double plane(double s, double m) { return 0.2 + 0.6 * m - 0.01 * s; }

}  // namespace

TEST(Iopc, LookupOnCellAndMidpoint) {
  Iopc c = filled(plane);
  EXPECT_NEAR(lookup_ap(c, 10, 0.75), plane(10, 0.75), 1e-15);
  c.set_cell(0, 0, 0.4, 1);
  c.set_cell(0, 1, 0.8, 1);
  EXPECT_NEAR(lookup_ap(c, 0, 0.625), 0.6, 1e-12);
  EXPECT_NEAR(lookup_ap(c, 5, 0.875), (0.8 + plane(0, 1.0) + plane(10, 0.75) + plane(10, 1.0)) / 4, 1e-12);
}

TEST(Iopc, OutsideHullIsRangeError) {
  const Iopc c = filled(plane);
  EXPECT_THROW(lookup_ap(c, 25, 0.8), RangeError);
  EXPECT_THROW(lookup_ap(c, 5, 0.4), RangeError);
  EXPECT_FALSE(in_hull(c, -1, 0.8));
  EXPECT_TRUE(in_hull(c, 20, 1.0));
}

TEST(Iopc, EmptyNeighbourIsRangeError) {
  Iopc c({0, 10}, {0.5, 1.0});
  c.set_cell(0, 0, 1.0, 1);
  c.set_cell(0, 1, 1.0, 1);
  c.set_cell(1, 1, 1.0, 1);
  EXPECT_THROW(lookup_ap(c, 5, 0.75), RangeError);
  EXPECT_NEAR(lookup_ap(c, 0, 0.75), 1.0, 1e-15);  // weight only on populated cells
}

TEST(Iopc, InsertNearestCountWeighted) {
  Iopc c({0, 10, 20}, {0.5, 1.0});
  c.insert(3.0, 0.9, 0.6);
  c.insert(4.9, 0.8, 0.9, 2);
  EXPECT_EQ(c.cell(0, 1).count, 3);
  EXPECT_NEAR(c.cell(0, 1).ap, (0.6 + 2 * 0.9) / 3, 1e-15);
  c.insert(100, 0.0, 0.1);  // clamps to the nearest edge cell
  EXPECT_EQ(c.cell(2, 0).count, 1);
  EXPECT_EQ(c.populated(), 2u);
  EXPECT_THROW(c.insert(1, 1, 1.5), InvalidArgument);
}

TEST(Iopc, GridValidation) {
  EXPECT_THROW(Iopc({0, 0}, {0.5, 1}), InvalidArgument);
  EXPECT_THROW(Iopc({0, 5}, {1, 0.5}), InvalidArgument);
  EXPECT_THROW(Iopc({}, {0.5}), InvalidArgument);
}

TEST(Iopc, JsonRoundTrip) {
  Iopc c = filled(plane);
  c.metadata().detector_id = "synthetic";
  c.metadata().seed = 99;
  c.metadata().blur_extents = {0, 3, 7};
  const Iopc back = iopc_from_json(iopc_to_json(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.metadata().detector_id, "synthetic");
  EXPECT_EQ(iopc_to_json(back), iopc_to_json(c));
  EXPECT_THROW(iopc_from_json("{\"sigma_grid\": 1}"), DataError);
  EXPECT_THROW(iopc_from_json("not json"), DataError);
}

TEST(BuildIopc, SmallGridWithOracle) {
  const auto scenes = scene_corpus(2, 256, 5);
  IopcGridSpec spec;
  spec.sigmas = {0, 15};
  spec.extents = {0, 11};
  const auto& reg = EstimatorRegistry::global();
  const SyntheticDetector det(1);
  const IopcBuild b = build_iopc(scenes, spec, *reg.noise("pca"), *reg.blur("mtf-oracle"), det, 3, "car");
  ASSERT_EQ(b.samples.size(), 4u);
  // Clean grid point: oracle MTF is exactly 1, PCA reads a small sigma.
  EXPECT_EQ(b.samples[0].mtf_median, 1.0);
  EXPECT_LT(b.samples[0].sigma_median, 2.0);
  EXPECT_EQ(b.samples[0].ap, 1.0);
  // Cells are indexed by the estimated medians.
  EXPECT_EQ(b.iopc.sigma_grid(), spec.sigmas);
  std::size_t i = std::abs(b.samples[2].sigma_median - 0.0) < std::abs(b.samples[2].sigma_median - 15.0) ? 0 : 1;
  EXPECT_EQ(i, 1u);
  // Deterministic.
  const IopcBuild again = build_iopc(scenes, spec, *reg.noise("pca"), *reg.blur("mtf-oracle"), det, 3, "car");
  EXPECT_EQ(iopc_to_json(again.iopc), iopc_to_json(b.iopc));
}

TEST(BuildIopc, RequiresGroundTruthBoxes) {
  std::vector<LabeledImage> none = {{"x", GrayImage(256, 256, 10.0), {}}};
  const auto& reg = EstimatorRegistry::global();
  IopcGridSpec spec;
  spec.sigmas = {0};
  spec.extents = {0};
  EXPECT_THROW(build_iopc(none, spec, *reg.noise("pca"), *reg.blur("mtf-oracle"), SyntheticDetector(1), 1, "car"),
               DataError);
}
