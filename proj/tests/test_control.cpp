#include <gtest/gtest.h>

#include <cmath>

#include "camhealth/control.hpp"
#include "camhealth/error.hpp"
#include "camhealth/kernel.hpp"

using namespace camhealth;

namespace {

const CalibrationTable& table() {
  static const CalibrationTable t = CalibrationTable::linear_motion();
  return t;
}

Iopc grid_iopc(double ap_of(double, double)) {
  std::vector<double> mtf = table().mtf();
  std::reverse(mtf.begin(), mtf.end());
  Iopc c({0, 5, 10, 15, 20, 25}, mtf);
  for (std::size_t i = 0; i < c.sigma_grid().size(); ++i) {
    for (std::size_t j = 0; j < mtf.size(); ++j) c.set_cell(i, j, ap_of(c.sigma_grid()[i], mtf[j]), 1);
  }
  return c;
}

}  // namespace

TEST(Calibration, Examples) {
  EXPECT_EQ(table().mtf_to_blur_extent(1.0), 0.0);
  const double m11 = kernel_mtf(linear_motion_kernel(11, 0)).scalar();
  EXPECT_NEAR(table().mtf_to_blur_extent(m11), 11.0, 1e-9);
  EXPECT_NEAR(table().blur_extent_to_mtf(11.0), m11, 1e-12);
  const double d = table().mtf_to_blur_extent(0.96);
  EXPECT_GE(d, 3.0);
  EXPECT_LE(d, 5.0);
  EXPECT_THROW(table().blur_extent_to_mtf(30.0), RangeError);
  EXPECT_THROW(CalibrationTable({0, 3, 7}, {1.0, 0.5, 0.8}), InvalidArgument);
}

TEST(Calibration, InverseIsConsistent) {
  for (double d = 0.0; d <= 21.0; d += 0.5) {
    EXPECT_NEAR(table().mtf_to_blur_extent(table().blur_extent_to_mtf(d)), d, 1e-9);
  }
}

TEST(AlphaForTarget, ExampleOne) {
  const AlphaDecision a = alpha_for_target(18.0, 9.0);
  EXPECT_EQ(a.alpha, 2.0);
  EXPECT_EQ(a.direction, ActionDirection::kBlurReduce);
  const AlphaDecision b = alpha_for_target(3.0, 8.0);
  EXPECT_NEAR(b.alpha, 8.0 / 3.0, 1e-15);
  EXPECT_EQ(b.direction, ActionDirection::kNoiseReduce);
  EXPECT_EQ(alpha_for_target(5.0, 5.0).direction, ActionDirection::kNone);
}

TEST(OptimalAlpha, ConstantIopcMeansNoAction) {
  const Iopc flat = grid_iopc([](double, double) { return 0.7; });
  const AlphaDecision a = optimal_alpha(flat, 10.0, table().blur_extent_to_mtf(7.0), table());
  EXPECT_EQ(a.alpha, 1.0);
  EXPECT_EQ(a.direction, ActionDirection::kNone);
}

TEST(OptimalAlpha, BlurDominatedPrefersShorterExposure) {
  const Iopc c = grid_iopc([](double s, double m) { return m - 0.005 * s; });
  const AlphaDecision a = optimal_alpha(c, 3.0, table().blur_extent_to_mtf(18.0), table());
  EXPECT_EQ(a.direction, ActionDirection::kBlurReduce);
  EXPECT_GT(a.alpha, 1.0);
  EXPECT_GE(a.predicted_ap_after, a.predicted_ap_before);
}

TEST(OptimalAlpha, ExampleTwoNoiseReduce) {
  // AP peaks around sigma 3.8 and an 8 px motion blur.
  std::vector<double> mtf = table().mtf();
  std::reverse(mtf.begin(), mtf.end());
  Iopc peaked({0, 5, 10, 15, 20, 25}, mtf);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < mtf.size(); ++j) {
      const double d = table().mtf_to_blur_extent(mtf[j]);
      peaked.set_cell(i, j, 1.0 - 0.02 * std::abs(peaked.sigma_grid()[i] - 3.8) - 0.02 * std::abs(d - 8.0), 1);
    }
  }
  const AlphaDecision a = optimal_alpha(peaked, 10.0, table().blur_extent_to_mtf(3.0), table());
  EXPECT_EQ(a.direction, ActionDirection::kNoiseReduce);
  // On the continuous surface alpha = 8/3; the bilinear surface peaks on
  // the d = 7 grid line instead. Dense search along the action path.
  double best = 0.0;
  for (double g = 1.0; g <= 7.0; g += 1e-4) {
    best = std::max(best, lookup_ap(peaked, 10.0 / g, table().blur_extent_to_mtf(3.0 * g)));
  }
  EXPECT_NEAR(a.predicted_ap_after, best, 2e-3);
  EXPECT_NEAR(a.alpha, 8.0 / 3.0, 0.4);
  EXPECT_GT(a.predicted_ap_after, a.predicted_ap_before);
}

TEST(ApplyAction, Examples) {
  const ActionResult a = apply_action({0.028, 1.0}, 2.0, ActionDirection::kBlurReduce);
  EXPECT_EQ(a.state.exposure_s, 0.014);
  EXPECT_EQ(a.state.iso, 2.0);
  EXPECT_FALSE(a.clipped);
  const ActionResult same = apply_action({0.02, 3.0}, 1.0, ActionDirection::kBlurReduce);
  EXPECT_EQ(same.state, (CameraState{0.02, 3.0}));
  const ActionResult n = apply_action({0.010, 8.0}, 2.7, ActionDirection::kNoiseReduce);
  EXPECT_NEAR(n.state.exposure_s, 0.027, 1e-15);
  EXPECT_NEAR(n.state.iso, 8.0 / 2.7, 1e-12);
  EXPECT_NEAR(n.state.iso, 2.96, 0.01);
}

TEST(ApplyAction, PreservesIntensityProduct) {
  for (double alpha : {1.0, 1.3, 2.0, 2.7, 5.5}) {
    for (ActionDirection d : {ActionDirection::kBlurReduce, ActionDirection::kNoiseReduce}) {
      const CameraState s{0.02, 2.0};
      const ActionResult r = apply_action(s, alpha, d);
      EXPECT_NEAR(r.state.exposure_s * r.state.iso, s.exposure_s * s.iso, 1e-12);
    }
  }
}

TEST(ApplyAction, ClipsAtBounds) {
  const ActionResult r = apply_action({0.5, 1.0}, 4.0, ActionDirection::kNoiseReduce);
  EXPECT_TRUE(r.clipped);
  EXPECT_EQ(r.state.exposure_s, 1.0);
  EXPECT_EQ(r.state.iso, 0.5);
  EXPECT_EQ(r.applied_alpha, 2.0);
  EXPECT_THROW(apply_action({0.01, 1.0}, 0.5, ActionDirection::kBlurReduce), InvalidArgument);
  EXPECT_THROW(apply_action({2.0, 1.0}, 1.0, ActionDirection::kBlurReduce), InvalidArgument);
}

TEST(ActionRecord, HasAllFields) {
  const AlphaDecision d = alpha_for_target(18, 9);
  const std::string j = action_record_json(d, apply_action({0.028, 1.0}, d.alpha, d.direction));
  for (const char* key : {"alpha", "direction", "new_exposure_s", "new_iso", "predicted_ap_before", "predicted_ap_after"}) {
    EXPECT_NE(j.find(std::string("\"") + key + "\""), std::string::npos) << key;
  }
}

TEST(ActionDirection, Strings) {
  for (ActionDirection d : {ActionDirection::kNone, ActionDirection::kBlurReduce, ActionDirection::kNoiseReduce}) {
    EXPECT_EQ(action_direction_from_string(to_string(d)), d);
  }
  EXPECT_THROW(action_direction_from_string("sideways"), InvalidArgument);
}
