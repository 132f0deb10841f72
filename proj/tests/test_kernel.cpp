#include <gtest/gtest.h>

#include <cmath>

#include "camhealth/convolve.hpp"
#include "camhealth/error.hpp"
#include "camhealth/kernel.hpp"
#include "camhealth/mtf.hpp"

using namespace camhealth;

TEST(CocDiameter, Examples) {
  EXPECT_EQ(coc_diameter(5, 50, 2000, 2000), 0.0);
  EXPECT_NEAR(coc_diameter(5, 50, 2000, 4000), 5.0 * (50.0 / 1950.0) * (2000.0 / 4000.0), 1e-12);
  EXPECT_NEAR(coc_diameter(10, 50, 2000, 4000), 2 * coc_diameter(5, 50, 2000, 4000), 1e-12);
}

TEST(DefocusKernel, DiameterOneIsIdentity) {
  const Kernel k = defocus_kernel(1);
  EXPECT_EQ(k.at(0, 0), 1.0);
  EXPECT_EQ(k.sum(), 1.0);
}

TEST(DefocusKernel, DiameterThreeIsPlusShape) {
  const Kernel k = defocus_kernel(3);
  int nonzero = 0;
  for (int dy = -k.radius(); dy <= k.radius(); ++dy) {
    for (int dx = -k.radius(); dx <= k.radius(); ++dx) {
      const double w = k.at(dx, dy);
      if (dx * dx + dy * dy <= 1) {
        EXPECT_NEAR(w, 0.2, 1e-15);
        ++nonzero;
      } else {
        EXPECT_EQ(w, 0.0);
      }
    }
  }
  EXPECT_EQ(nonzero, 5);
}

TEST(DefocusKernel, GridSizesNormalizedAndOdd) {
  for (int d : kBlurSizeGrid) {
    const Kernel k = defocus_kernel(d);
    EXPECT_NEAR(k.sum(), 1.0, 1e-9);
    EXPECT_EQ(k.size() % 2, 1);
    EXPECT_EQ(k.info().type, KernelType::kDefocus);
  }
  EXPECT_THROW(defocus_kernel(4), InvalidArgument);
  EXPECT_THROW(defocus_kernel(33), InvalidArgument);
}

TEST(MotionKernel, HorizontalLengthThree) {
  const Kernel k = linear_motion_kernel(3, 0.0);
  for (int dx = -1; dx <= 1; ++dx) EXPECT_NEAR(k.at(dx, 0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(k.sum(), 1.0, 1e-12);
  EXPECT_EQ(k.at(2, 0), 0.0);
  EXPECT_EQ(k.at(0, 1), 0.0);
}

TEST(MotionKernel, VerticalIsTranspose) {
  for (int d : kBlurSizeGrid) {
    const Kernel h = linear_motion_kernel(d, 0.0);
    const Kernel v = linear_motion_kernel(d, 90.0);
    for (int dy = -h.radius(); dy <= h.radius(); ++dy) {
      for (int dx = -h.radius(); dx <= h.radius(); ++dx) EXPECT_NEAR(v.at(dy, dx), h.at(dx, dy), 1e-12);
    }
  }
}

TEST(MotionKernel, NonlinearArcLength) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (int d : kBlurSizeGrid) {
      const Kernel k = nonlinear_motion_kernel(d, seed);
      EXPECT_NEAR(k.sum(), 1.0, 1e-9);
      EXPECT_FALSE(k.info().linear);
      ASSERT_TRUE(k.info().seed.has_value());
    }
    const MotionPath p = random_smooth_path(11, seed);
    EXPECT_NEAR(p.arc_length(), 11.0, 1e-9);
  }
}

TEST(MotionKernel, NonlinearDeterministicPerSeed) {
  EXPECT_EQ(nonlinear_motion_kernel(11, 5).weights(), nonlinear_motion_kernel(11, 5).weights());
  EXPECT_NE(nonlinear_motion_kernel(11, 5).weights(), nonlinear_motion_kernel(11, 6).weights());
}

TEST(RasterizedArcLength, AxisAndDiagonal) {
  EXPECT_NEAR(rasterized_arc_length(linear_path(11, 0)), 11.0, 1e-9);
  // A 45 degree path visits a diagonal chain of pixels.
  const double diag = rasterized_arc_length(linear_path(10 * std::sqrt(2.0), 45));
  EXPECT_NEAR(diag, 1 + 10 * std::sqrt(2.0), 1.5);
}

TEST(Compose, MatchesConvolutionOfImpulse) {
  const Kernel a = defocus_kernel(3);
  const Kernel b = linear_motion_kernel(7, 30.0);
  const Kernel c = compose(a, b);
  EXPECT_EQ(c.size(), a.size() + b.size() - 1);
  EXPECT_NEAR(c.sum(), 1.0, 1e-12);
  EXPECT_EQ(c.info().type, KernelType::kComposite);
  // Brute-force oracle at a few offsets.
  for (int dy = -3; dy <= 3; ++dy) {
    for (int dx = -5; dx <= 5; ++dx) {
      double want = 0.0;
      for (int y = -a.radius(); y <= a.radius(); ++y) {
        for (int x = -a.radius(); x <= a.radius(); ++x) {
          const int bx = dx - x;
          const int by = dy - y;
          if (std::abs(bx) <= b.radius() && std::abs(by) <= b.radius()) want += a.at(x, y) * b.at(bx, by);
        }
      }
      EXPECT_NEAR(c.at(dx, dy), want, 1e-15);
    }
  }
}

TEST(Kernel, RejectsBadWeights) {
  EXPECT_THROW(Kernel(4, std::vector<double>(16, 1.0 / 16)), InvalidArgument);
  EXPECT_THROW(Kernel(3, std::vector<double>(9, 0.5)), InvalidArgument);
  std::vector<double> w(9, 0.0);
  w[0] = -1;
  w[1] = 2;
  EXPECT_THROW(Kernel(3, w), InvalidArgument);
}

TEST(KernelType, StringRoundTrip) {
  for (KernelType t : {KernelType::kIdentity, KernelType::kDefocus, KernelType::kLinearMotion,
                       KernelType::kNonlinearMotion, KernelType::kComposite}) {
    EXPECT_EQ(kernel_type_from_string(to_string(t)), t);
  }
  EXPECT_THROW(kernel_type_from_string("box"), InvalidArgument);
}
