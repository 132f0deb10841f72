#include "camhealth/closed_loop.hpp"

#include <cmath>

#include "camhealth/error.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {

double SimulatedCamera::sigma(const CameraState& s) const {
  return s.iso * std::sqrt(read_sigma * read_sigma + dark_rate * s.exposure_s);
}

LoopObservation observe(const LabeledImage& scene, const CameraState& state,
                        const SimulatedCamera& camera, const Iopc& iopc,
                        const NoiseEstimator& noise, const BlurEstimator& blur,
                        const Detector& detector, std::uint64_t seed, bool keep_intensity) {
  LoopObservation o;
  o.state = state;
  o.applied_extent = camera.extent(state);
  o.applied_sigma = camera.sigma(state);
  if (o.applied_sigma > 30.0) throw DataError("simulated noise level above 30 DN");

  GrayImage img = scene.image;
  if (!keep_intensity) {
    const double k = camera.intensity_scale(state);
    for (double& v : img.pixels()) v *= k;
  }
  CorruptionRecipe recipe;
  recipe.stages.push_back(BlurStage{linear_motion_kernel(o.applied_extent)});
  if (o.applied_sigma >= 1.0) {
    recipe.stages.push_back(NoiseStage{NoiseConfig::sensor(o.applied_sigma, split_seed(seed, 1))});
  }
  CorruptionResult r = corrupt_pipeline(img, recipe);
  r.truth.seed = seed;

  const PatchMedians m = estimate_medians(r.image, scene.gts, noise, blur, EstimationContext{&r.truth});
  o.sigma_hat = m.sigma;
  o.mtf_hat = m.mtf;
  o.predicted_ap = lookup_ap(iopc, o.sigma_hat, o.mtf_hat);
  const std::vector<DetBox> dets = detector.detect(r.image, SceneInfo{scene.id, scene.gts, &r.truth});
  o.detected_ap = average_precision(dets, scene.gts);
  return o;
}

LoopResult run_closed_loop(const LabeledImage& scene, const CameraState& start,
                           const SimulatedCamera& camera, const Iopc& iopc,
                           const CalibrationTable& table, const CameraBounds& bounds,
                           const NoiseEstimator& noise, const BlurEstimator& blur,
                           const Detector& detector, std::uint64_t seed) {
  LoopResult r;
  r.before = observe(scene, start, camera, iopc, noise, blur, detector, split_seed(seed, 0));
  r.decision = optimal_alpha(iopc, r.before.sigma_hat, r.before.mtf_hat, table);
  r.action = apply_action(start, r.decision.alpha, r.decision.direction, bounds);
  r.after = observe(scene, r.action.state, camera, iopc, noise, blur, detector, split_seed(seed, 1));
  return r;
}

}  // namespace camhealth
