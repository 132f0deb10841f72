#include "camhealth/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "camhealth/error.hpp"
#include "camhealth/image_io.hpp"

namespace camhealth {
namespace {

MtfCurve curve_from_json(const Json& j) {
  if (!j.is_array() || j.size() != kMtfSampleCount) throw DataError("MTF curve must have 8 values");
  MtfCurve c{};
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) c[i] = j[i].get<double>();
  return c;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid JSON content: ") + e.what());
  }
}

}  // namespace

Json to_json(const MtfSamples& m) {
  return Json{{"frequencies", kMtfFrequencies}, {"h", m.h}, {"v", m.v}};
}

MtfSamples mtf_samples_from_json(const Json& j) {
  return guarded([&] { return MtfSamples{curve_from_json(j.at("h")), curve_from_json(j.at("v"))}; });
}

Json to_json(const KernelInfo& info) {
  Json j{{"type", to_string(info.type)},
         {"extent_px", info.extent_px},
         {"orientation_deg", info.orientation_deg},
         {"linear", info.linear}};
  j["seed"] = info.seed ? Json(*info.seed) : Json(nullptr);
  return j;
}

KernelInfo kernel_info_from_json(const Json& j) {
  return guarded([&] {
    KernelInfo info;
    info.type = kernel_type_from_string(j.at("type").get<std::string>());
    info.extent_px = j.at("extent_px").get<double>();
    info.orientation_deg = j.value("orientation_deg", 0.0);
    info.linear = j.value("linear", true);
    if (j.contains("seed") && !j["seed"].is_null()) info.seed = j["seed"].get<std::uint64_t>();
    return info;
  });
}

Json to_json(const Kernel& k) {
  Json j = to_json(k.info());
  j["size"] = k.size();
  j["weights"] = k.weights();
  return j;
}

Kernel kernel_from_json(const Json& j) {
  return guarded([&] {
    return Kernel(j.at("size").get<int>(), j.at("weights").get<std::vector<double>>(), kernel_info_from_json(j));
  });
}

Json to_json(const NoiseConfig& c) {
  Json src = Json::array();
  for (NoiseSource s : c.sources) src.push_back(to_string(s));
  Json j{{"sources", src}, {"temperature_k", c.temperature_k}, {"exposure_s", c.exposure_s}};
  j["target_sigma"] = c.target_sigma ? Json(*c.target_sigma) : Json(nullptr);
  j["seed"] = c.seed;
  return j;
}

NoiseConfig noise_config_from_json(const Json& j) {
  return guarded([&] {
    NoiseConfig c;
    for (const auto& s : j.at("sources")) c.sources.push_back(noise_source_from_string(s.get<std::string>()));
    c.temperature_k = j.value("temperature_k", 330.0);
    c.exposure_s = j.value("exposure_s", 0.1);
    if (j.contains("target_sigma") && !j["target_sigma"].is_null()) c.target_sigma = j["target_sigma"].get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
  });
}

Json to_json(const NoiseGroundTruth& n) {
  Json src = Json::array();
  for (NoiseSource s : n.sources) src.push_back(to_string(s));
  return Json{{"sigma", n.sigma},
              {"sources", src},
              {"position", to_string(n.position)},
              {"temperature_k", n.temperature_k},
              {"exposure_s", n.exposure_s}};
}

NoiseGroundTruth noise_ground_truth_from_json(const Json& j) {
  return guarded([&] {
    NoiseGroundTruth n;
    n.sigma = j.at("sigma").get<double>();
    for (const auto& s : j.at("sources")) n.sources.push_back(noise_source_from_string(s.get<std::string>()));
    n.position = noise_position_from_string(j.at("position").get<std::string>());
    n.temperature_k = j.value("temperature_k", 0.0);
    n.exposure_s = j.value("exposure_s", 0.0);
    return n;
  });
}

Json to_json(const GroundTruthBundle& b) {
  Json blurs = Json::array();
  for (const AppliedBlur& a : b.blurs) {
    Json k = to_json(a.info);
    k["mtf"] = to_json(a.mtf);
    blurs.push_back(k);
  }
  Json noises = Json::array();
  for (const NoiseGroundTruth& n : b.noises) noises.push_back(to_json(n));
  return Json{{"seed", b.seed},
              {"blurs", blurs},
              {"noises", noises},
              {"combined_mtf", to_json(b.combined_mtf())},
              {"total_sigma", b.total_sigma()}};
}

GroundTruthBundle bundle_from_json(const Json& j) {
  return guarded([&] {
    GroundTruthBundle b;
    b.seed = j.value("seed", std::uint64_t{0});
    for (const auto& k : j.at("blurs")) b.blurs.push_back({kernel_info_from_json(k), mtf_samples_from_json(k.at("mtf"))});
    for (const auto& n : j.at("noises")) b.noises.push_back(noise_ground_truth_from_json(n));
    return b;
  });
}

Json to_json(const NoiseEstimate& e) {
  return Json{{"origin", {e.x, e.y}}, {"method", e.method}, {"sigma_hat", e.sigma_hat}};
}

Json to_json(const MtfEstimate& e) {
  return Json{{"origin", {e.x, e.y}},
              {"method", e.method},
              {"mtf_h", e.mtf.h},
              {"mtf_v", e.mtf.v},
              {"batch_size", e.batch_size},
              {"clamp_count", e.clamp_count}};
}

void save_kernel(const Kernel& k, const std::filesystem::path& stem) {
  const double peak = *std::max_element(k.weights().begin(), k.weights().end());
  GrayImage view(k.size(), k.size());
  for (int y = 0; y < k.size(); ++y) {
    for (int x = 0; x < k.size(); ++x) {
      view(x, y) = peak > 0.0 ? 255.0 * k.at(x - k.radius(), y - k.radius()) / peak : 0.0;
    }
  }
  std::filesystem::path pgm = stem;
  pgm += ".pgm";
  std::filesystem::path json = stem;
  json += ".json";
  save_pgm(view, pgm);
  write_file_atomic(json, to_json(k).dump(2) + "\n");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace camhealth
