#include "camhealth/mtf_division.hpp"

#include <algorithm>
#include <json.hpp>

#include "camhealth/error.hpp"

namespace camhealth {

void DivisionGuard::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("division guard epsilon must be in (0, 1)");
}

namespace {

std::vector<std::size_t> omitted(const PartialCurve& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    if (!c[i]) out.push_back(i);
  }
  return out;
}

std::array<bool, kMtfSampleCount> mask(const PartialCurve& c) {
  std::array<bool, kMtfSampleCount> m{};
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) m[i] = c[i].has_value();
  return m;
}

}  // namespace

std::vector<std::size_t> PartialMtf::omitted_h() const { return omitted(h); }
std::vector<std::size_t> PartialMtf::omitted_v() const { return omitted(v); }
std::array<bool, kMtfSampleCount> PartialMtf::mask_h() const { return mask(h); }
std::array<bool, kMtfSampleCount> PartialMtf::mask_v() const { return mask(v); }

MtfSamples PartialMtf::filled(double fill) const {
  MtfSamples m;
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    m.h[i] = h[i].value_or(fill);
    m.v[i] = v[i].value_or(fill);
  }
  return m;
}

PartialMtf divide_mtf(const MtfSamples& combined, const MtfSamples& known_b2,
                      const DivisionGuard& guard) {
  guard.validate();
  PartialMtf out;
  bool any = false;
  auto divide = [&](const MtfCurve& c, const MtfCurve& k, PartialCurve& dst) {
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      if (!(c[i] > guard.epsilon && k[i] > guard.epsilon)) continue;
      double q = c[i] / k[i];
      if (q > 1.0) {
        q = 1.0;
        ++out.clamp_count;
      }
      dst[i] = std::max(0.0, q);
      any = true;
    }
  };
  divide(combined.h, known_b2.h, out.h);
  divide(combined.v, known_b2.v, out.v);
  if (!any) throw DataError("MTF division: no recoverable band");
  return out;
}

MtfSamples min_envelope_over_time(std::span<const MtfSamples> estimates) {
  if (estimates.empty()) throw InvalidArgument("min envelope of an empty sequence");
  MtfSamples m = estimates.front();
  for (const MtfSamples& e : estimates.subspan(1)) {
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      m.h[i] = std::min(m.h[i], e.h[i]);
      m.v[i] = std::min(m.v[i], e.v[i]);
    }
  }
  return m;
}

std::string division_record_json(const PartialMtf& result) {
  auto curve = [](const PartialCurve& c) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& v : c) a.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
    return a;
  };
  auto freqs = [](const std::vector<std::size_t>& idx) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (std::size_t i : idx) a.push_back(kMtfFrequencies[i]);
    return a;
  };
  nlohmann::ordered_json j;
  j["recovered"] = {{"h", curve(result.h)}, {"v", curve(result.v)}};
  j["omitted_frequencies"] = {{"h", freqs(result.omitted_h())}, {"v", freqs(result.omitted_v())}};
  j["clamp_count"] = result.clamp_count;
  return j.dump();
}

}  // namespace camhealth
