#include "camhealth/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "camhealth/closed_loop.hpp"
#include "camhealth/control.hpp"
#include "camhealth/error.hpp"
#include "camhealth/metrics.hpp"
#include "camhealth/mtf_division.hpp"
#include "camhealth/rng.hpp"
#include "camhealth/scene.hpp"

namespace camhealth {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

MtfSamples median_mtf(const std::vector<MtfEstimate>& estimates) {
  MtfSamples m;
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    std::vector<double> h;
    std::vector<double> v;
    for (const MtfEstimate& e : estimates) {
      h.push_back(e.mtf.h[i]);
      v.push_back(e.mtf.v[i]);
    }
    m.h[i] = robust_stats(h).median;
    m.v[i] = robust_stats(v).median;
  }
  return m;
}

// Median spectral estimate over the corpus after applying `recipe`.
MtfSamples corpus_mtf(const std::vector<GrayImage>& corpus, const CorruptionRecipe& recipe,
                      const BlurEstimator& blur, std::vector<MtfSamples>* per_batch = nullptr) {
  std::vector<MtfEstimate> all;
  for (const GrayImage& img : corpus) {
    const CorruptionResult r = corrupt_pipeline(img, recipe);
    for (MtfEstimate& e : estimate_frame_mtf(r.image, blur, EstimationContext{&r.truth})) {
      if (per_batch != nullptr) per_batch->push_back(e.mtf);
      all.push_back(std::move(e));
    }
  }
  return median_mtf(all);
}

std::vector<Artifact> table1(const ReproduceConfig& c) {
  const std::vector<GrayImage> corpus = texture_corpus(c.images, c.size, c.seed);
  const SpectralMtfEstimator spectral(fit_corpus_reference(corpus));
  const OracleMtfEstimator oracle;
  const std::pair<const char*, const BlurEstimator*> methods[] = {{"synthetic/mtf-spectral", &spectral},
                                                                   {"synthetic/mtf-oracle", &oracle}};
  const std::pair<const char*, const char*> families[] = {
      {"defocus", "defocus"}, {"lin-motion", "lin-motion"}, {"nonlin-motion", "nonlin-motion"}};
  AmaeTable table;
  std::uint64_t index = 0;
  for (const auto& [column, token] : families) {
    for (int d : kBlurSizeGrid) {
      const CorruptionRecipe recipe =
          parse_recipe(std::string(token) + ":" + std::to_string(d), split_seed(c.seed, 1000 + index++));
      for (const auto& [row, est] : methods) {
        std::vector<double> scores;
        for (const GrayImage& img : corpus) {
          const CorruptionResult r = corrupt_pipeline(img, recipe);
          for (const MtfEstimate& e : estimate_frame_mtf(r.image, *est, EstimationContext{&r.truth})) {
            scores.push_back(amae(e.mtf, r.truth.combined_mtf()).amae);
          }
        }
        table.set(row, std::string(column) + "-" + std::to_string(d), robust_stats(scores).median);
      }
    }
  }
  return {{"table1.csv", table.to_csv()}};
}

std::vector<Artifact> table2(const ReproduceConfig& c) {
  const std::vector<GrayImage> corpus = texture_corpus(c.images, c.size, c.seed);
  const SpectralMtfEstimator spectral(fit_corpus_reference(corpus));
  constexpr int kD2 = 7;
  const Kernel b2 = linear_motion_kernel(kD2, 0.0);
  const MtfSamples b2_gt = kernel_mtf(b2);

  // Accuracy of the estimator on the second filter alone.
  CorruptionRecipe only_b2;
  only_b2.stages.push_back(BlurStage{b2});
  const double a2 = amae(corpus_mtf(corpus, only_b2, spectral), b2_gt).amae;

  std::string csv = "d1,sigma,mae_h,mae_v,amae,expected_amae,omitted,clamp_count\n";
  std::uint64_t row = 0;
  for (int d1 : {3, 11}) {
    const Kernel b1 = linear_motion_kernel(d1, 90.0);
    const MtfSamples b1_gt = kernel_mtf(b1);
    CorruptionRecipe only_b1;
    only_b1.stages.push_back(BlurStage{b1});
    const double a1 = amae(corpus_mtf(corpus, only_b1, spectral), b1_gt).amae;
    for (double sigma : {10.0, 25.0}) {
      CorruptionRecipe recipe;
      recipe.stages.push_back(BlurStage{b1});
      recipe.stages.push_back(NoiseStage{NoiseConfig::isolated(NoiseSource::kDcsn, sigma, split_seed(c.seed, 2000 + row++))});
      recipe.stages.push_back(BlurStage{b2});
      std::vector<MtfSamples> frames;
      corpus_mtf(corpus, recipe, spectral, &frames);
      const MtfSamples envelope = min_envelope_over_time(frames);
      const PartialMtf recovered = divide_mtf(envelope, b2_gt);
      const AmaeScore s = amae_masked(recovered.filled(), b1_gt, recovered.mask_h(), recovered.mask_v());
      const std::size_t omitted = recovered.omitted_h().size() + recovered.omitted_v().size();
      csv += std::to_string(d1) + "," + fmt("%g", sigma) + "," + fmt("%.2f", s.mae_h) + "," +
             fmt("%.2f", s.mae_v) + "," + fmt("%.2f", s.amae) + "," + fmt("%.2f", expected_amae(a1, a2)) +
             "," + std::to_string(omitted) + "," + std::to_string(recovered.clamp_count) + "\n";
    }
  }
  return {{"table2.csv", csv}};
}

std::vector<Artifact> fig8_noise(const ReproduceConfig& c) {
  const std::vector<GrayImage> corpus = texture_corpus(c.images, c.size, c.seed);
  const BlockFilterNoiseEstimator bf;
  const PcaNoiseEstimator pca;
  const std::pair<const char*, const NoiseEstimator*> methods[] = {{"bf", &bf}, {"pca", &pca}};
  const char* kinds[] = {"photon", "dcsn", "readout", "combined"};
  std::string csv = "noise,sigma,method,min,median,max,n\n";
  std::uint64_t index = 0;
  for (const char* kind : kinds) {
    for (double sigma : kSigmaGrid) {
      const CorruptionRecipe recipe =
          parse_recipe(std::string(kind) + ":" + fmt("%g", sigma), split_seed(c.seed, 3000 + index++));
      std::vector<std::vector<double>> hats(2);
      for (const GrayImage& img : corpus) {
        const CorruptionResult r = corrupt_pipeline(img, recipe);
        for (std::size_t m = 0; m < 2; ++m) {
          for (const NoiseEstimate& e : estimate_noise_tiles(r.image, *methods[m].second)) {
            hats[m].push_back(e.sigma_hat);
          }
        }
      }
      for (std::size_t m = 0; m < 2; ++m) {
        const RobustStats s = robust_stats(hats[m]);
        csv += std::string(kind) + "," + fmt("%g", sigma) + "," + methods[m].first + "," + fmt("%.3f", s.min) +
               "," + fmt("%.3f", s.median) + "," + fmt("%.3f", s.max) + "," + std::to_string(s.n_samples) + "\n";
      }
    }
  }
  return {{"fig8_noise.csv", csv}};
}

IopcBuild heat_map(const ReproduceConfig& c) {
  const std::vector<LabeledImage> scenes = scene_corpus(c.images, c.size, c.seed);
  const auto& reg = EstimatorRegistry::global();
  const SyntheticDetector detector(split_seed(c.seed, 4000));
  return build_iopc(scenes, IopcGridSpec{}, *reg.noise(c.noise_estimator), *reg.blur(c.blur_estimator),
                    detector, split_seed(c.seed, 4001), "car");
}

std::vector<Artifact> fig9_heat(const ReproduceConfig& c) {
  const IopcBuild b = heat_map(c);
  std::string samples = "applied_sigma,applied_extent,sigma_median,mtf_median,ap\n";
  for (const IopcSample& s : b.samples) {
    samples += fmt("%g", s.applied_sigma) + "," + fmt("%g", s.applied_extent) + "," + fmt("%.4f", s.sigma_median) +
               "," + fmt("%.4f", s.mtf_median) + "," + fmt("%.4f", s.ap) + "\n";
  }
  return {{"fig9_heat.csv", iopc_to_csv(b.iopc)}, {"fig9_samples.csv", samples}, {"fig9_iopc.json", iopc_to_json(b.iopc)}};
}

nlohmann::ordered_json state_json(const std::string& label, const LoopObservation& o) {
  return {{"label", label},
          {"exposure_s", o.state.exposure_s},
          {"iso", o.state.iso},
          {"applied_extent_px", o.applied_extent},
          {"applied_sigma", o.applied_sigma},
          {"sigma_hat", o.sigma_hat},
          {"mtf_hat", o.mtf_hat},
          {"predicted_ap", o.predicted_ap},
          {"detected_ap", o.detected_ap}};
}

std::vector<Artifact> fig10_walkthrough(const ReproduceConfig& c) {
  const IopcBuild b = heat_map(c);
  const auto& reg = EstimatorRegistry::global();
  const auto& noise = *reg.noise(c.noise_estimator);
  const auto& blur = *reg.blur(c.blur_estimator);
  const SyntheticDetector detector(split_seed(c.seed, 4000));
  const LabeledImage scene = scene_corpus(1, c.size, split_seed(c.seed, 5000)).front();
  const CalibrationTable table = CalibrationTable::linear_motion();

  // 760 px/s; 28 ms gives about 21 px of motion and 3 DN of sensor noise.
  SimulatedCamera cam;
  cam.speed_px_per_s = 760.0;
  cam.dark_rate = 20.0;
  cam.read_sigma = std::sqrt(9.0 - cam.dark_rate * 0.028);
  cam.reference_exposure_s = 0.028;
  const CameraState start{0.028, 1.0};
  constexpr double kTargetExtent = 9.0;

  const std::uint64_t s = split_seed(c.seed, 5001);
  // The clean frame: essentially no exposure blur and no noise.
  LoopObservation clean;
  clean.state = start;
  {
    CorruptionRecipe none;
    none.stages.push_back(BlurStage{Kernel::identity()});
    CorruptionResult r = corrupt_pipeline(scene.image, none);
    const PatchMedians m = estimate_medians(r.image, scene.gts, noise, blur, EstimationContext{&r.truth});
    clean.sigma_hat = m.sigma;
    clean.mtf_hat = m.mtf;
    clean.predicted_ap = lookup_ap(b.iopc, m.sigma, m.mtf);
    clean.detected_ap = average_precision(detector.detect(r.image, SceneInfo{scene.id, scene.gts, &r.truth}), scene.gts);
  }
  const LoopObservation blurred = observe(scene, start, cam, b.iopc, noise, blur, detector, split_seed(s, 1), false);
  const double d_hat = table.mtf_to_blur_extent(blurred.mtf_hat);
  const AlphaDecision decision = alpha_for_target(d_hat, kTargetExtent);
  const CameraState shorter{start.exposure_s / decision.alpha, start.iso};
  const LoopObservation dimmed = observe(scene, shorter, cam, b.iopc, noise, blur, detector, split_seed(s, 2), false);
  const ActionResult action = apply_action(start, decision.alpha, decision.direction);
  const LoopObservation restored = observe(scene, action.state, cam, b.iopc, noise, blur, detector, split_seed(s, 3), false);

  nlohmann::ordered_json j;
  j["example"] = "blur-reduce toward a 9 px target";
  j["speed_px_per_s"] = cam.speed_px_per_s;
  j["d_hat_px"] = d_hat;
  j["d_target_px"] = kTargetExtent;
  j["alpha"] = decision.alpha;
  j["direction"] = to_string(decision.direction);
  j["states"] = {state_json("clean", clean), state_json("blurred", blurred),
                 state_json("shorter-exposure", dimmed), state_json("iso-compensated", restored)};
  return {{"fig10_walkthrough.json", j.dump(2) + "\n"}};
}

}  // namespace

const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids = {"table1", "table2", "fig8-noise", "fig9-heat", "fig10-walkthrough"};
  return ids;
}

std::vector<GrayImage> texture_corpus(int count, int size, std::uint64_t seed) {
  std::vector<GrayImage> out;
  for (int i = 0; i < count; ++i) {
    const double alpha = 1.2 + 0.3 * static_cast<double>(i % 3) / 2.0;
    out.push_back(spectral_texture(size, size, alpha, 110.0, 22.0, split_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

std::vector<LabeledImage> scene_corpus(int count, int size, std::uint64_t seed) {
  std::vector<LabeledImage> out;
  for (int i = 0; i < count; ++i) {
    Scene s = make_scene("scene" + std::to_string(i), size, size, split_seed(seed, static_cast<std::uint64_t>(i)));
    out.push_back({s.id, std::move(s.image), std::move(s.objects)});
  }
  return out;
}

ReferenceSpectrum fit_corpus_reference(const std::vector<GrayImage>& corpus) {
  std::vector<Patch> patches;
  for (const GrayImage& img : corpus) {
    for (const Patch& p : tile_patches(img, kBlurPatchSize, kBlurPatchSize)) patches.push_back(p);
  }
  return fit_reference_spectrum(patches);
}

std::vector<MtfEstimate> estimate_frame_mtf(const GrayImage& img, const BlurEstimator& blur,
                                            const EstimationContext& ctx) {
  const std::vector<Patch> tiles = tile_patches(img, kBlurPatchSize, kBlurPatchSize);
  std::vector<MtfEstimate> out;
  for (std::size_t b = 0; b < tiles.size(); b += 4) {
    const std::size_t n = std::min<std::size_t>(4, tiles.size() - b);
    out.push_back(blur.estimate(std::span<const Patch>(tiles.data() + b, n), ctx));
  }
  return out;
}

std::vector<Artifact> reproduce(const ReproduceConfig& c) {
  if (c.images < 1) throw InvalidArgument("reproduce needs at least one image");
  if (c.size < kBlurPatchSize) throw InvalidArgument("reproduce image size must be at least 192");
  if (c.id == "table1") return table1(c);
  if (c.id == "table2") return table2(c);
  if (c.id == "fig8-noise") return fig8_noise(c);
  if (c.id == "fig9-heat") return fig9_heat(c);
  if (c.id == "fig10-walkthrough") return fig10_walkthrough(c);
  throw InvalidArgument("unknown reproduce id: " + c.id);
}

}  // namespace camhealth
