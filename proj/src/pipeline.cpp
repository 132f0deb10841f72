#include "camhealth/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "camhealth/convolve.hpp"
#include "camhealth/error.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& token) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("recipe: bad number in '" + token + "'");
  }
}

}  // namespace

void CorruptionRecipe::validate() const {
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (const auto* n = std::get_if<NoiseStage>(&stages[i])) {
      n->config.validate();
      if (i > 0 && n->config.has(NoiseSource::kPhoton)) {
        throw InvalidArgument(
            "recipe: photon noise must precede all other stages (it arises before blur "
            "and sensor noise)");
      }
    }
  }
}

MtfSamples GroundTruthBundle::combined_mtf() const {
  MtfSamples m = MtfSamples::ones();
  for (const AppliedBlur& b : blurs) m = m * b.mtf;
  return m;
}

double GroundTruthBundle::total_sigma() const {
  double v = 0.0;
  for (const NoiseGroundTruth& n : noises) v += n.sigma * n.sigma;
  return std::sqrt(v);
}

CorruptionResult corrupt_pipeline(const GrayImage& img, const CorruptionRecipe& recipe,
                                  const SensorConstants& constants) {
  recipe.validate();
  CorruptionResult result{img, {}};
  const std::size_t n = recipe.stages.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Stage& stage = recipe.stages[i];
    if (const auto* b = std::get_if<BlurStage>(&stage)) {
      result.image = convolve(result.image, b->kernel);
      result.truth.blurs.push_back({b->kernel.info(), kernel_mtf(b->kernel)});
      continue;
    }
    const NoiseConfig& cfg = std::get<NoiseStage>(stage).config;
    GrayImage field = raw_noise_field(result.image, cfg, constants);
    double sigma = field_sigma(field);
    if (cfg.target_sigma) {
      ScaledField scaled = scale_to_sigma(field, *cfg.target_sigma);
      field = std::move(scaled.field);
      sigma = scaled.sigma;
    }
    auto dst = result.image.pixels();
    auto src = field.pixels();
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += src[p];

    bool blur_before = false;
    bool blur_after = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::holds_alternative<BlurStage>(recipe.stages[j])) (j < i ? blur_before : blur_after) = true;
    }
    NoiseGroundTruth gt;
    gt.sigma = sigma;
    gt.sources = cfg.sources;
    gt.temperature_k = cfg.temperature_k;
    gt.exposure_s = cfg.exposure_s;
    gt.position = blur_before ? (blur_after ? NoisePosition::kBetweenBlur : NoisePosition::kPostBlur)
                              : (blur_after ? NoisePosition::kPreBlur : NoisePosition::kNoBlur);
    result.truth.noises.push_back(gt);
  }
  return result;
}

CorruptionRecipe parse_recipe(const std::string& text, std::uint64_t seed) {
  CorruptionRecipe recipe;
  std::string rest = text;
  std::size_t index = 0;
  while (true) {
    const auto cut = rest.find('>');
    const std::string token = trim(rest.substr(0, cut));
    if (token.empty()) throw InvalidArgument("recipe: empty stage in '" + text + "'");
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw InvalidArgument("recipe: stage '" + token + "' lacks ':'");
    const std::string name = trim(token.substr(0, colon));
    std::string arg = trim(token.substr(colon + 1));
    const std::uint64_t stage_seed = split_seed(seed, index);

    if (name == "defocus") {
      const double d = parse_number(arg, token);
      if (d != std::floor(d)) throw InvalidArgument("recipe: defocus diameter must be an integer");
      recipe.stages.push_back(BlurStage{defocus_kernel(static_cast<int>(d))});
    } else if (name == "lin-motion") {
      double angle = 0.0;
      if (const auto at = arg.find('@'); at != std::string::npos) {
        angle = parse_number(trim(arg.substr(at + 1)), token);
        arg = trim(arg.substr(0, at));
      }
      recipe.stages.push_back(BlurStage{linear_motion_kernel(parse_number(arg, token), angle)});
    } else if (name == "nonlin-motion") {
      recipe.stages.push_back(BlurStage{nonlinear_motion_kernel(parse_number(arg, token), stage_seed)});
    } else if (name == "photon" || name == "dcsn" || name == "readout") {
      recipe.stages.push_back(
          NoiseStage{NoiseConfig::isolated(noise_source_from_string(name), parse_number(arg, token), stage_seed)});
    } else if (name == "sensor") {
      recipe.stages.push_back(NoiseStage{NoiseConfig::sensor(parse_number(arg, token), stage_seed)});
    } else if (name == "combined") {
      recipe.stages.push_back(NoiseStage{NoiseConfig::combined(parse_number(arg, token), stage_seed)});
    } else {
      throw InvalidArgument("recipe: unknown stage '" + name + "'");
    }
    ++index;
    if (cut == std::string::npos) break;
    rest = rest.substr(cut + 1);
  }
  recipe.validate();
  return recipe;
}

}  // namespace camhealth
