#pragma once

#include <filesystem>
#include <json.hpp>

#include "camhealth/estimators.hpp"
#include "camhealth/kernel.hpp"
#include "camhealth/mtf.hpp"
#include "camhealth/noise.hpp"
#include "camhealth/pipeline.hpp"

namespace camhealth {

using Json = nlohmann::ordered_json;

Json to_json(const MtfSamples& m);
MtfSamples mtf_samples_from_json(const Json& j);

Json to_json(const KernelInfo& info);
KernelInfo kernel_info_from_json(const Json& j);

// Exact weights plus metadata.
Json to_json(const Kernel& k);
Kernel kernel_from_json(const Json& j);

Json to_json(const NoiseConfig& c);
NoiseConfig noise_config_from_json(const Json& j);

Json to_json(const NoiseGroundTruth& n);
NoiseGroundTruth noise_ground_truth_from_json(const Json& j);

Json to_json(const GroundTruthBundle& b);
GroundTruthBundle bundle_from_json(const Json& j);

// JSON-lines record {origin, method, sigma_hat} / {origin, method, mtf_h, mtf_v, ...}.
Json to_json(const NoiseEstimate& e);
Json to_json(const MtfEstimate& e);

// `<stem>.pgm` with weights rescaled so the peak is 255, and `<stem>.json`
// with the exact weights and metadata.
void save_kernel(const Kernel& k, const std::filesystem::path& stem);

// Parses a whole file as JSON; DataError when unreadable or malformed.
Json read_json_file(const std::filesystem::path& path);

}  // namespace camhealth
