#pragma once

#include <cstdint>

#include "camhealth/control.hpp"
#include "camhealth/iopc.hpp"

namespace camhealth {

// Simulated camera: horizontal motion blur of length speed * exposure and
// sensor noise with sigma^2 = iso^2 * (read^2 + dark_rate * exposure).
// The dark-current term is what the trade-off model leaves out.
struct SimulatedCamera {
  double speed_px_per_s = 760.0;
  double read_sigma = 1.0;      // DN at ISO 1
  double dark_rate = 20.0;      // DN^2 per second at ISO 1
  double reference_exposure_s = 0.01;  // exposure * ISO at which intensity is unscaled

  double extent(const CameraState& s) const { return speed_px_per_s * s.exposure_s; }
  double sigma(const CameraState& s) const;
  double intensity_scale(const CameraState& s) const {
    return s.exposure_s * s.iso / reference_exposure_s;
  }
};

struct LoopObservation {
  CameraState state;
  double applied_sigma = 0.0;
  double applied_extent = 0.0;
  double sigma_hat = 0.0;
  double mtf_hat = 1.0;
  double predicted_ap = 0.0;
  double detected_ap = 0.0;  // AP of the detector on this frame
};

// Images the scene at `state` and measures it. When `keep_intensity` is
// false the frame is scaled by exposure * ISO relative to the reference.
LoopObservation observe(const LabeledImage& scene, const CameraState& state,
                        const SimulatedCamera& camera, const Iopc& iopc,
                        const NoiseEstimator& noise, const BlurEstimator& blur,
                        const Detector& detector, std::uint64_t seed,
                        bool keep_intensity = true);

struct LoopResult {
  LoopObservation before;
  AlphaDecision decision;
  ActionResult action;
  LoopObservation after;
};

// observe -> optimal_alpha -> apply_action -> observe again.
LoopResult run_closed_loop(const LabeledImage& scene, const CameraState& start,
                           const SimulatedCamera& camera, const Iopc& iopc,
                           const CalibrationTable& table, const CameraBounds& bounds,
                           const NoiseEstimator& noise, const BlurEstimator& blur,
                           const Detector& detector, std::uint64_t seed);

}  // namespace camhealth
