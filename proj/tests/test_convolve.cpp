#include <gtest/gtest.h>

#include "camhealth/convolve.hpp"
#include "camhealth/kernel.hpp"
#include "camhealth/scene.hpp"

using namespace camhealth;

TEST(Convolve, IdentityKeepsImage) {
  const GrayImage img = spectral_texture(64, 48, 1.3, 100, 20, 1);
  EXPECT_EQ(convolve(img, Kernel::identity()), img);
  EXPECT_EQ(convolve(img, Kernel::identity(1)), img);
}

TEST(Convolve, ConstantPreserved) {
  const GrayImage img = flat_image(40, 40, 77.0);
  for (const Kernel& k : {defocus_kernel(11), linear_motion_kernel(7, 33), nonlinear_motion_kernel(15, 3)}) {
    const GrayImage out = convolve(img, k);
    for (double v : out.pixels()) EXPECT_NEAR(v, 77.0, 1e-9);
  }
}

TEST(Convolve, ImpulseEmbedsKernel) {
  GrayImage img(61, 61);
  img(30, 30) = 1.0;
  const Kernel k = nonlinear_motion_kernel(11, 9);
  const GrayImage out = convolve(img, k);
  for (int dy = -k.radius(); dy <= k.radius(); ++dy) {
    for (int dx = -k.radius(); dx <= k.radius(); ++dx) EXPECT_NEAR(out(30 + dx, 30 + dy), k.at(dx, dy), 1e-15);
  }
}

TEST(Convolve, ReflectsAtBorders) {
  const GrayImage img = gradient_image(40, 40, 1, 40);
  const GrayImage out = convolve(img, linear_motion_kernel(3, 0));
  // Left edge sees 1 | 1 2, right edge 39 40 | 40.
  EXPECT_NEAR(out(0, 7), (1 + 1 + 2) / 3.0, 1e-12);
  EXPECT_NEAR(out(39, 7), (39 + 40 + 40) / 3.0, 1e-12);
  EXPECT_NEAR(out(20, 7), 21.0, 1e-12);
  EXPECT_EQ(reflect_index(-1, 5), 0);
  EXPECT_EQ(reflect_index(5, 5), 4);
}

TEST(Convolve, ParallelMatchesSerialBitwise) {
  const GrayImage img = spectral_texture(203, 157, 1.4, 110, 25, 4);
  for (const Kernel& k : {defocus_kernel(21), linear_motion_kernel(15, 17), nonlinear_motion_kernel(7, 2)}) {
    EXPECT_EQ(convolve(img, k), convolve_serial(img, k));
  }
}
