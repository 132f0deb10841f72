#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camhealth/estimators.hpp"
#include "camhealth/iopc.hpp"

namespace camhealth {

// Desk-scale recipes behind `camhealth reproduce`. Every recipe runs on
// seeded synthetic textures and scenes, so outputs depend on the seed only.
struct ReproduceConfig {
  std::string id;
  std::uint64_t seed = 0;
  int images = 4;  // corpus size
  int size = 384;  // square image side, pixels
  std::string noise_estimator = "pca";
  std::string blur_estimator = "mtf-oracle";
};

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string contents;
};

const std::vector<std::string>& reproduce_ids();

// Throws InvalidArgument for unknown ids or bad sizes.
std::vector<Artifact> reproduce(const ReproduceConfig& config);

// Seeded texture corpus used by the blur and noise tables.
std::vector<GrayImage> texture_corpus(int count, int size, std::uint64_t seed);

// Seeded scenes with ground-truth boxes of class "car".
std::vector<LabeledImage> scene_corpus(int count, int size, std::uint64_t seed);

// Reference spectrum fitted on every 192x192 tile of the clean corpus.
ReferenceSpectrum fit_corpus_reference(const std::vector<GrayImage>& corpus);

// Blur estimates of a corrupted frame: one per batch of up to four
// consecutive 192x192 tiles.
std::vector<MtfEstimate> estimate_frame_mtf(const GrayImage& img, const BlurEstimator& blur,
                                            const EstimationContext& ctx);

}  // namespace camhealth
