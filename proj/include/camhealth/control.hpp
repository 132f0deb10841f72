#pragma once

#include <span>
#include <string>
#include <vector>

#include "camhealth/iopc.hpp"
#include "camhealth/mtf.hpp"

namespace camhealth {

struct CameraBounds {
  double t_min = 1e-4;
  double t_max = 1.0;
  double iso_min = 0.125;
  double iso_max = 64.0;

  void validate() const;
};

struct CameraState {
  double exposure_s = 0.01;
  double iso = 1.0;

  bool operator==(const CameraState&) const = default;
};

enum class ActionDirection { kNone, kBlurReduce, kNoiseReduce };

std::string to_string(ActionDirection d);
ActionDirection action_direction_from_string(const std::string& name);

// Linear exposure trade-off: a gain g multiplies sigma by g and divides
// the blur extent by g (exposure / g, ISO * g). g > 1 reduces blur, g < 1
// reduces noise. The dark-current growth with exposure time is ignored.
struct TradeoffModel {
  static double sigma_after(double sigma, double gain) { return sigma * gain; }
  static double extent_after(double extent, double gain) { return extent / gain; }
};

// Blur scalar of linear-motion kernels against their length, inverted by
// piecewise-linear interpolation.
class CalibrationTable {
 public:
  // Extents strictly increasing; MTF values must strictly decrease.
  CalibrationTable(std::vector<double> extents, std::vector<double> mtf,
                   double frequency = kDefaultScalarFrequency);

  static CalibrationTable linear_motion(std::vector<double> extents = {0, 3, 7, 11, 15, 21},
                                        double frequency = kDefaultScalarFrequency);

  const std::vector<double>& extents() const { return extents_; }
  const std::vector<double>& mtf() const { return mtf_; }
  double frequency() const { return frequency_; }

  // Clamped to the table's extent range.
  double mtf_to_blur_extent(double mtf) const;
  // Throws RangeError outside the table's extent range.
  double blur_extent_to_mtf(double extent) const;

 private:
  std::vector<double> extents_;
  std::vector<double> mtf_;
  double frequency_;
};

// 65 gains spaced geometrically over [1/8, 8]; contains 1 exactly.
std::vector<double> default_alpha_grid();
std::vector<double> geometric_grid(double lo, double hi, int n);

struct AlphaDecision {
  double alpha = 1.0;  // factor >= 1 applied in `direction`
  ActionDirection direction = ActionDirection::kNone;
  double gain = 1.0;  // signed form: sigma * gain, extent / gain
  double sigma_before = 0.0;
  double extent_before = 0.0;
  double mtf_before = 1.0;
  double sigma_after = 0.0;
  double extent_after = 0.0;
  double mtf_after = 1.0;
  double predicted_ap_before = 0.0;
  double predicted_ap_after = 0.0;
  int feasible = 0;  // grid gains whose prediction stayed inside the IOPC
};

// Grid search for the gain maximizing the interpolated AP. Ties within
// 1e-12 go to the gain closest to 1. Throws RangeError when the current
// point is outside the IOPC or no gain is feasible.
AlphaDecision optimal_alpha(const Iopc& iopc, double sigma_hat, double mtf_hat,
                            const CalibrationTable& table,
                            std::span<const double> gains = {});

// Factor moving the blur extent from d_hat to d_target.
AlphaDecision alpha_for_target(double d_hat, double d_target);

struct ActionResult {
  CameraState state;
  double applied_alpha = 1.0;
  bool clipped = false;  // requested factor reduced to respect the bounds
};

// blur-reduce: exposure / alpha, ISO * alpha; noise-reduce: the reverse.
// The factor is shrunk when a bound would be crossed, keeping the
// exposure-ISO product unchanged.
ActionResult apply_action(const CameraState& state, double alpha, ActionDirection direction,
                          const CameraBounds& bounds = {});

// {alpha, direction, new_exposure_s, new_iso, predicted_ap_before,
//  predicted_ap_after, clipped}
std::string action_record_json(const AlphaDecision& decision, const ActionResult& action);

}  // namespace camhealth
