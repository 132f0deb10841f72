#include "camhealth/control.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "camhealth/error.hpp"

namespace camhealth {

void CameraBounds::validate() const {
  if (!(t_min > 0.0 && t_max >= t_min && iso_min > 0.0 && iso_max >= iso_min)) {
    throw InvalidArgument("camera bounds must be positive with min <= max");
  }
}

std::string to_string(ActionDirection d) {
  switch (d) {
    case ActionDirection::kNone:
      return "none";
    case ActionDirection::kBlurReduce:
      return "blur-reduce";
    case ActionDirection::kNoiseReduce:
      return "noise-reduce";
  }
  return "none";
}

ActionDirection action_direction_from_string(const std::string& name) {
  if (name == "none") return ActionDirection::kNone;
  if (name == "blur-reduce") return ActionDirection::kBlurReduce;
  if (name == "noise-reduce") return ActionDirection::kNoiseReduce;
  throw InvalidArgument("unknown action direction: " + name);
}

CalibrationTable::CalibrationTable(std::vector<double> extents, std::vector<double> mtf,
                                   double frequency)
    : extents_(std::move(extents)), mtf_(std::move(mtf)), frequency_(frequency) {
  if (extents_.size() < 2 || extents_.size() != mtf_.size()) {
    throw InvalidArgument("calibration table needs at least two matching entries");
  }
  for (std::size_t i = 1; i < extents_.size(); ++i) {
    if (!(extents_[i] > extents_[i - 1])) throw InvalidArgument("calibration extents must increase");
    if (!(mtf_[i] < mtf_[i - 1])) throw InvalidArgument("non-monotone calibration table");
  }
}

CalibrationTable CalibrationTable::linear_motion(std::vector<double> extents, double frequency) {
  std::vector<double> mtf;
  for (double d : extents) {
    const Kernel k = d == 0.0 ? Kernel::identity() : linear_motion_kernel(d);
    mtf.push_back(kernel_mtf(k).scalar(frequency));
  }
  return CalibrationTable(std::move(extents), std::move(mtf), frequency);
}

double CalibrationTable::mtf_to_blur_extent(double m) const {
  if (m >= mtf_.front()) return extents_.front();
  if (m <= mtf_.back()) return extents_.back();
  std::size_t i = 1;
  while (mtf_[i] > m) ++i;
  const double t = (mtf_[i - 1] - m) / (mtf_[i - 1] - mtf_[i]);
  return extents_[i - 1] + t * (extents_[i] - extents_[i - 1]);
}

double CalibrationTable::blur_extent_to_mtf(double d) const {
  if (!(d >= extents_.front() && d <= extents_.back())) {
    throw RangeError("blur extent outside the calibration table");
  }
  std::size_t i = 1;
  while (i + 1 < extents_.size() && extents_[i] < d) ++i;
  const double t = (d - extents_[i - 1]) / (extents_[i] - extents_[i - 1]);
  return mtf_[i - 1] + t * (mtf_[i] - mtf_[i - 1]);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw InvalidArgument("geometric grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g;
  const double a = std::log2(lo);
  const double b = std::log2(hi);
  for (int i = 0; i < n; ++i) g.push_back(std::exp2(a + (b - a) * i / (n - 1)));
  return g;
}

std::vector<double> default_alpha_grid() { return geometric_grid(1.0 / 8.0, 8.0, 65); }

namespace {

AlphaDecision from_gain(double gain) {
  AlphaDecision d;
  d.gain = gain;
  if (gain > 1.0) {
    d.alpha = gain;
    d.direction = ActionDirection::kBlurReduce;
  } else if (gain < 1.0) {
    d.alpha = 1.0 / gain;
    d.direction = ActionDirection::kNoiseReduce;
  }
  return d;
}

}  // namespace

AlphaDecision optimal_alpha(const Iopc& iopc, double sigma_hat, double mtf_hat,
                            const CalibrationTable& table, std::span<const double> gains) {
  std::vector<double> fallback;
  if (gains.empty()) {
    fallback = default_alpha_grid();
    gains = fallback;
  }
  const double before = lookup_ap(iopc, sigma_hat, mtf_hat);
  const double extent = table.mtf_to_blur_extent(mtf_hat);

  AlphaDecision best;
  bool found = false;
  int feasible = 0;
  for (double g : gains) {
    if (!(g > 0.0)) throw InvalidArgument("alpha grid values must be positive");
    const double d2 = TradeoffModel::extent_after(extent, g);
    const double s2 = TradeoffModel::sigma_after(sigma_hat, g);
    if (d2 > table.extents().back()) continue;
    const double m2 = table.blur_extent_to_mtf(d2);
    if (!in_hull(iopc, s2, m2)) continue;
    double ap;
    try {
      ap = lookup_ap(iopc, s2, m2);
    } catch (const RangeError&) {
      continue;
    }
    ++feasible;
    bool better = !found || ap > best.predicted_ap_after + 1e-12;
    if (found && !better && std::abs(ap - best.predicted_ap_after) <= 1e-12) {
      const double a = std::abs(std::log(g));
      const double b = std::abs(std::log(best.gain));
      better = a < b || (a == b && g > best.gain);
    }
    if (better) {
      best = from_gain(g);
      best.sigma_after = s2;
      best.extent_after = d2;
      best.mtf_after = m2;
      best.predicted_ap_after = ap;
      found = true;
    }
  }
  if (!found) throw RangeError("no feasible alpha keeps the operating point inside the IOPC");
  best.sigma_before = sigma_hat;
  best.extent_before = extent;
  best.mtf_before = mtf_hat;
  best.predicted_ap_before = before;
  best.feasible = feasible;
  return best;
}

AlphaDecision alpha_for_target(double d_hat, double d_target) {
  if (!(d_hat > 0.0 && d_target > 0.0)) throw InvalidArgument("blur extents must be positive");
  AlphaDecision d = from_gain(d_hat / d_target);
  d.extent_before = d_hat;
  d.extent_after = d_target;
  return d;
}

ActionResult apply_action(const CameraState& state, double alpha, ActionDirection direction,
                          const CameraBounds& bounds) {
  bounds.validate();
  if (!(alpha >= 1.0)) throw InvalidArgument("action factor must be >= 1");
  if (!(state.exposure_s >= bounds.t_min && state.exposure_s <= bounds.t_max &&
        state.iso >= bounds.iso_min && state.iso <= bounds.iso_max)) {
    throw InvalidArgument("camera state outside its bounds");
  }
  ActionResult r{state, 1.0, false};
  if (direction == ActionDirection::kNone || alpha == 1.0) return r;
  double limit;
  if (direction == ActionDirection::kBlurReduce) {
    limit = std::min(state.exposure_s / bounds.t_min, bounds.iso_max / state.iso);
  } else {
    limit = std::min(bounds.t_max / state.exposure_s, state.iso / bounds.iso_min);
  }
  double a = alpha;
  if (a > limit) {
    a = std::max(1.0, limit);
    r.clipped = true;
  }
  r.applied_alpha = a;
  if (direction == ActionDirection::kBlurReduce) {
    r.state.exposure_s = state.exposure_s / a;
    r.state.iso = state.iso * a;
  } else {
    r.state.exposure_s = state.exposure_s * a;
    r.state.iso = state.iso / a;
  }
  return r;
}

std::string action_record_json(const AlphaDecision& decision, const ActionResult& action) {
  nlohmann::ordered_json j;
  j["alpha"] = action.applied_alpha;
  j["direction"] = to_string(decision.direction);
  j["new_exposure_s"] = action.state.exposure_s;
  j["new_iso"] = action.state.iso;
  j["predicted_ap_before"] = decision.predicted_ap_before;
  j["predicted_ap_after"] = decision.predicted_ap_after;
  j["clipped"] = action.clipped;
  return j.dump();
}

}  // namespace camhealth
