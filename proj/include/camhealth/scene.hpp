#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camhealth/detection.hpp"
#include "camhealth/image.hpp"

namespace camhealth {

// Random-phase texture whose amplitude spectrum is exactly c / f^alpha,
// shifted and scaled to the requested mean and standard deviation.
GrayImage spectral_texture(int width, int height, double alpha, double mean, double stddev,
                           std::uint64_t seed);

GrayImage flat_image(int width, int height, double value);

// Horizontal ramp from `lo` at x = 0 to `hi` at the last column.
GrayImage gradient_image(int width, int height, double lo, double hi);

struct Scene {
  std::string id;
  GrayImage image;
  std::vector<DetBox> objects;
};

// Textured background with 3 to 5 non-overlapping textured objects.
Scene make_scene(const std::string& id, int width, int height, std::uint64_t seed,
                 const std::string& object_class = "car");

}  // namespace camhealth
