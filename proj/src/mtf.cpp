#include "camhealth/mtf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "camhealth/error.hpp"

namespace camhealth {
namespace {

// On the fy = 0 axis the 2-D transform reduces to the 1-D transform of the
// kernel's column sums (and symmetrically for fx = 0). Evaluating that sum
// directly is the infinite zero-padding limit of the sampled DFT.
std::vector<double> projection(const Kernel& k, bool onto_x) {
  const int r = k.radius();
  std::vector<double> p(static_cast<std::size_t>(k.size()), 0.0);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      p[static_cast<std::size_t>((onto_x ? dx : dy) + r)] += k.at(dx, dy);
    }
  }
  return p;
}

double transfer_magnitude(const std::vector<double>& p, double f) {
  const int r = static_cast<int>(p.size()) / 2;
  std::complex<double> acc = 0.0;
  double dc = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double w = p[static_cast<std::size_t>(i + r)];
    if (w == 0.0) continue;
    acc += w * std::polar(1.0, -2.0 * std::numbers::pi * f * i);
    dc += w;
  }
  return std::abs(acc) / std::abs(dc);
}

double interpolate(const MtfCurve& c, double f) {
  if (f <= kMtfFrequencies.front()) return c.front();
  if (f >= kMtfFrequencies.back()) return c.back();
  for (std::size_t i = 1; i < kMtfSampleCount; ++i) {
    if (f <= kMtfFrequencies[i]) {
      const double t = (f - kMtfFrequencies[i - 1]) / (kMtfFrequencies[i] - kMtfFrequencies[i - 1]);
      return c[i - 1] + t * (c[i] - c[i - 1]);
    }
  }
  return c.back();
}

}  // namespace

MtfSamples MtfSamples::ones() {
  MtfSamples m;
  m.h.fill(1.0);
  m.v.fill(1.0);
  return m;
}

double MtfSamples::scalar(double f) const {
  return 0.5 * (interpolate(h, f) + interpolate(v, f));
}

MtfSamples operator*(const MtfSamples& a, const MtfSamples& b) {
  MtfSamples out;
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    out.h[i] = a.h[i] * b.h[i];
    out.v[i] = a.v[i] * b.v[i];
  }
  return out;
}

double kernel_mtf_h(const Kernel& k, double f) {
  return transfer_magnitude(projection(k, true), f);
}

double kernel_mtf_v(const Kernel& k, double f) {
  return transfer_magnitude(projection(k, false), f);
}

MtfSamples kernel_mtf(const Kernel& k) {
  const std::vector<double> px = projection(k, true);
  const std::vector<double> py = projection(k, false);
  MtfSamples m;
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    m.h[i] = std::min(1.0, transfer_magnitude(px, kMtfFrequencies[i]));
    m.v[i] = std::min(1.0, transfer_magnitude(py, kMtfFrequencies[i]));
  }
  return m;
}

}  // namespace camhealth
