#include "camhealth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "camhealth/error.hpp"

namespace camhealth {

AmaeScore amae(const MtfSamples& est, const MtfSamples& gt) {
  std::array<bool, kMtfSampleCount> all;
  all.fill(true);
  return amae_masked(est, gt, all, all);
}

AmaeScore amae_masked(const MtfSamples& est, const MtfSamples& gt,
                      const std::array<bool, kMtfSampleCount>& use_h,
                      const std::array<bool, kMtfSampleCount>& use_v) {
  auto mae = [](const MtfCurve& a, const MtfCurve& b, const std::array<bool, kMtfSampleCount>& use) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      if (!use[i]) continue;
      sum += std::abs(a[i] - b[i]);
      ++n;
    }
    if (n == 0) throw InvalidArgument("AMAE: no usable sample in a direction");
    return 100.0 * sum / n;
  };
  AmaeScore s;
  s.mae_h = mae(est.h, gt.h, use_h);
  s.mae_v = mae(est.v, gt.v, use_v);
  s.amae = 0.5 * (s.mae_h + s.mae_v);
  return s;
}

double expected_amae(double a1, double a2) {
  if (a1 < 0.0 || a2 < 0.0) throw InvalidArgument("expected_amae: negative input");
  return std::hypot(a1, a2);
}

RobustStats robust_stats(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("robust_stats: empty input");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t trim = static_cast<std::size_t>(std::floor(0.025 * static_cast<double>(v.size())));
  const std::size_t lo = trim;
  const std::size_t hi = v.size() - trim;  // exclusive
  const std::size_t n = hi - lo;
  RobustStats s;
  s.min = v[lo];
  s.max = v[hi - 1];
  s.median = n % 2 == 1 ? v[lo + n / 2] : 0.5 * (v[lo + n / 2 - 1] + v[lo + n / 2]);
  s.n_samples = values.size();
  return s;
}

void AmaeTable::set(const std::string& row, const std::string& column, double value) {
  if (std::find(columns.begin(), columns.end(), column) == columns.end()) columns.push_back(column);
  rows[row][column] = value;
}

std::string AmaeTable::to_csv() const {
  std::string out = "method";
  for (const std::string& c : columns) out += "," + c;
  out += "\n";
  char buf[32];
  for (const auto& [name, cells] : rows) {
    out += name;
    for (const std::string& c : columns) {
      auto it = cells.find(c);
      if (it == cells.end()) {
        out += ",";
      } else {
        std::snprintf(buf, sizeof buf, ",%.2f", it->second);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace camhealth
