#pragma once

#include <array>
#include <cstddef>

#include "camhealth/kernel.hpp"

namespace camhealth {

inline constexpr std::size_t kMtfSampleCount = 8;

// Spatial frequencies (lines/px) at which MTFs are exchanged system-wide.
inline constexpr std::array<double, kMtfSampleCount> kMtfFrequencies = {
    0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6};

// Frequency of the scalar blur measure used on IOPC axes and by the
// exposure controller. See README ("Blur scalar").
inline constexpr double kDefaultScalarFrequency = 0.05;

using MtfCurve = std::array<double, kMtfSampleCount>;

struct MtfSamples {
  MtfCurve h{};
  MtfCurve v{};

  static MtfSamples ones();

  // Mean of the horizontal and vertical curves at frequency f, linearly
  // interpolated between the fixed sample frequencies.
  double scalar(double f = kDefaultScalarFrequency) const;

  bool operator==(const MtfSamples&) const = default;
};

// Elementwise product (MTF of cascaded blurs).
MtfSamples operator*(const MtfSamples& a, const MtfSamples& b);

// Normalized magnitude of the kernel's 2-D transfer function along the
// horizontal (fy = 0) and vertical (fx = 0) frequency axes, evaluated
// exactly at the sample frequencies.
MtfSamples kernel_mtf(const Kernel& k);

// Same quantity at an arbitrary frequency.
double kernel_mtf_h(const Kernel& k, double f);
double kernel_mtf_v(const Kernel& k, double f);

}  // namespace camhealth
