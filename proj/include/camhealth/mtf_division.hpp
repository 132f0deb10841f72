#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "camhealth/mtf.hpp"

namespace camhealth {

struct DivisionGuard {
  double epsilon = 0.1;

  void validate() const;
};

// One direction of a recovered MTF; omitted samples are empty.
using PartialCurve = std::array<std::optional<double>, kMtfSampleCount>;

struct PartialMtf {
  PartialCurve h;
  PartialCurve v;
  int clamp_count = 0;  // quotients above 1 clamped to 1

  // Indices into kMtfFrequencies that were omitted, per direction.
  std::vector<std::size_t> omitted_h() const;
  std::vector<std::size_t> omitted_v() const;
  std::array<bool, kMtfSampleCount> mask_h() const;
  std::array<bool, kMtfSampleCount> mask_v() const;
  // Omitted samples filled with `fill`.
  MtfSamples filled(double fill = 0.0) const;
};

// combined / known_b2 where both exceed epsilon, clamped to [0, 1]. The
// requirement that the combined estimate not exceed the true MTF of b1
// cannot be checked here and is assumed. Throws DataError when every
// sample is omitted.
PartialMtf divide_mtf(const MtfSamples& combined, const MtfSamples& known_b2,
                      const DivisionGuard& guard = {});

// Per-direction, per-frequency minimum.
MtfSamples min_envelope_over_time(std::span<const MtfSamples> estimates);

// {"recovered": {"h": [...], "v": [...]}, "omitted_frequencies": {"h": [...],
// "v": [...]}, "clamp_count": n}; omitted samples are null.
std::string division_record_json(const PartialMtf& result);

}  // namespace camhealth
