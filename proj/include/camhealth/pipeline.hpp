#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "camhealth/image.hpp"
#include "camhealth/kernel.hpp"
#include "camhealth/mtf.hpp"
#include "camhealth/noise.hpp"

namespace camhealth {

struct BlurStage {
  Kernel kernel;
};

struct NoiseStage {
  NoiseConfig config;
};

using Stage = std::variant<BlurStage, NoiseStage>;

// Ordered list of physical corruption stages. Photon noise happens at the
// sensor before any blur is integrated, so a stage containing photon noise
// may only come first; sensor noise and blur stages follow in any order.
struct CorruptionRecipe {
  std::vector<Stage> stages;

  void validate() const;
  bool empty() const { return stages.empty(); }
};

struct AppliedBlur {
  KernelInfo info;
  MtfSamples mtf;
};

struct GroundTruthBundle {
  std::vector<AppliedBlur> blurs;
  std::vector<NoiseGroundTruth> noises;
  std::uint64_t seed = 0;

  // Product of all applied kernels' MTFs (ones when no blur was applied).
  MtfSamples combined_mtf() const;
  // Root-sum-square of the realized noise levels.
  double total_sigma() const;
};

struct CorruptionResult {
  GrayImage image;
  GroundTruthBundle truth;
};

// Applies the recipe in order. Noise stages are amplified to their target
// sigma; each stage's realized sigma and position relative to the blur
// stages are recorded.
CorruptionResult corrupt_pipeline(const GrayImage& img, const CorruptionRecipe& recipe,
                                  const SensorConstants& constants = {});

// Parses a compact recipe such as
//   "photon:10 > lin-motion:3@90 > dcsn:10"
// Stage tokens: defocus:D, lin-motion:D[@ANGLE], nonlin-motion:D,
// photon:S, dcsn:S, readout:S, sensor:S (dcsn + readout), combined:S.
// Noise stages get sub-seeds of `seed`; non-linear kernels too.
CorruptionRecipe parse_recipe(const std::string& text, std::uint64_t seed);

}  // namespace camhealth
