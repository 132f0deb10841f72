#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "camhealth/mtf.hpp"

namespace camhealth {

// Mean absolute MTF errors in percent.
struct AmaeScore {
  double mae_h = 0.0;
  double mae_v = 0.0;
  double amae = 0.0;
};

AmaeScore amae(const MtfSamples& est, const MtfSamples& gt);

// Same, restricted to the samples flagged in `use_h` / `use_v`. Throws if
// a direction has no usable sample.
AmaeScore amae_masked(const MtfSamples& est, const MtfSamples& gt,
                      const std::array<bool, kMtfSampleCount>& use_h,
                      const std::array<bool, kMtfSampleCount>& use_v);

// Error propagation of two independent estimates: sqrt(a1^2 + a2^2).
double expected_amae(double a1, double a2);

// Min / median / max after removing floor(0.025 n) values from each tail.
struct RobustStats {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  std::size_t n_samples = 0;
};

RobustStats robust_stats(std::span<const double> values);

// Trimmed median used by the estimator property checks.
inline double trimmed_median(std::span<const double> values) { return robust_stats(values).median; }

// AMAE table: one row per method/dataset label, one column per
// kernel type and size (e.g. "defocus-7"). Cells hold AMAE in percent.
struct AmaeTable {
  std::vector<std::string> columns;
  std::map<std::string, std::map<std::string, double>> rows;

  void set(const std::string& row, const std::string& column, double value);
  std::string to_csv() const;
};

}  // namespace camhealth
