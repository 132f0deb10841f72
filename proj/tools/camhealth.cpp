#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "camhealth/control.hpp"
#include "camhealth/error.hpp"
#include "camhealth/experiments.hpp"
#include "camhealth/image_io.hpp"
#include "camhealth/iopc.hpp"
#include "camhealth/metrics.hpp"
#include "camhealth/rng.hpp"
#include "camhealth/serialize.hpp"

namespace fs = std::filesystem;
using namespace camhealth;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

// Config file reader: a JSON object whose nested objects name subcommands,
// e.g. {"corrupt": {"seed": 7, "recipe": "defocus:7"}}.
class JsonConfig final : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void walk(const Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        std::vector<std::string> p = parents;
        p.push_back(key);
        walk(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const Json& e : value) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

// Resolved option values of a subcommand, embedded into every output.
Json run_config(const CLI::App& sub) {
  Json run;
  run["command"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "json" || name == "config") continue;
    if (opt->count() > 0) {
      const std::vector<std::string> values = opt->as<std::vector<std::string>>();
      if (opt->get_expected_max() > 1) {
        run[name] = values;
      } else {
        run[name] = values.empty() ? std::string() : values.front();
      }
    } else if (!opt->get_default_str().empty()) {
      std::string d = opt->get_default_str();
      if (opt->get_expected_max() > 1) {
        // Vector defaults render as "[a,b]".
        if (d.size() >= 2 && d.front() == '[' && d.back() == ']') d = d.substr(1, d.size() - 2);
        Json list = Json::array();
        std::stringstream ss(d);
        for (std::string item; std::getline(ss, item, ',');) list.push_back(item);
        run[name] = list;
      } else {
        run[name] = d;
      }
    } else {
      run[name] = nullptr;
    }
  }
  return run;
}

std::string csv_with_run(const Json& run, const std::string& csv) { return "# run: " + run.dump() + "\n" + csv; }

std::string json_with_run(const Json& run, Json body) {
  Json out;
  out["run"] = run;
  for (auto& [k, v] : body.items()) out[k] = v;
  return out.dump(2) + "\n";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_supported_image(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw DataError("no PGM or PNG images in " + dir.string());
  return out;
}

std::vector<fs::path> list_inputs(const fs::path& input) {
  if (fs::is_regular_file(input)) return {input};
  return list_images(input);
}

fs::path sidecar_path(const fs::path& image) {
  fs::path p = image;
  p.replace_extension(".gt.json");
  return p;
}

GroundTruthBundle load_sidecar(const fs::path& image) {
  const fs::path p = sidecar_path(image);
  if (!fs::exists(p)) throw DataError("ground-truth sidecar missing: " + p.string());
  const Json j = read_json_file(p);
  if (!j.contains("truth")) throw DataError("sidecar without truth record: " + p.string());
  return bundle_from_json(j["truth"]);
}

SensorConstants load_constants(const std::string& path) {
  SensorConstants c;
  if (path.empty()) return c;
  const Json j = read_json_file(path);
  try {
    c.dark_variance_ref = j.value("dark_variance_ref", c.dark_variance_ref);
    c.activation_energy_ev = j.value("activation_energy_ev", c.activation_energy_ev);
    c.reference_temp_k = j.value("reference_temp_k", c.reference_temp_k);
    c.reset_sigma_ref = j.value("reset_sigma_ref", c.reset_sigma_ref);
    c.source_follower_sigma_ref = j.value("source_follower_sigma_ref", c.source_follower_sigma_ref);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad camera constants file: ") + e.what());
  }
  return c;
}

std::shared_ptr<const BlurEstimator> blur_estimator(const std::string& id, const std::string& reference_dir) {
  if (id == "mtf-spectral" && !reference_dir.empty()) {
    std::vector<GrayImage> sharp;
    for (const fs::path& p : list_images(reference_dir)) sharp.push_back(load_gray(p));
    return std::make_shared<SpectralMtfEstimator>(fit_corpus_reference(sharp));
  }
  return EstimatorRegistry::global().blur(id);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string blur_key(const GroundTruthBundle& truth) {
  std::string key;
  for (const AppliedBlur& b : truth.blurs) {
    if (!key.empty()) key += "+";
    key += to_string(b.info.type) + "-" + fmt("%g", b.info.extent_px);
  }
  return key;
}

std::string noise_key(const GroundTruthBundle& truth) {
  std::set<std::string> names;
  for (const NoiseGroundTruth& n : truth.noises) {
    for (NoiseSource s : n.sources) names.insert(to_string(s));
  }
  if (names.empty()) return "none";
  std::string key;
  for (const std::string& n : names) key += (key.empty() ? "" : "+") + n;
  return key;
}

struct Summary {
  Json fields;
  std::string text;
};

// ---- subcommands ----------------------------------------------------------

struct CorruptArgs {
  std::string input, output, recipe, constants;
  std::uint64_t seed = 0;
};

Summary cmd_corrupt(const CorruptArgs& a, const Json& run) {
  parse_recipe(a.recipe, a.seed).validate();
  const SensorConstants constants = load_constants(a.constants);
  const std::vector<fs::path> images = list_images(a.input);
  fs::create_directories(a.output);
  Json entries = Json::array();
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::uint64_t seed = split_seed(a.seed, i);
    const CorruptionResult r = corrupt_pipeline(load_gray(images[i]), parse_recipe(a.recipe, seed), constants);
    const fs::path out = fs::path(a.output) / images[i].filename();
    save_gray(r.image, out);
    Json side;
    side["image"] = out.filename().string();
    side["source"] = images[i].filename().string();
    side["seed"] = seed;
    side["truth"] = to_json(r.truth);
    write_file_atomic(sidecar_path(out), json_with_run(run, side));
    entries.push_back({{"image", out.filename().string()},
                       {"sidecar", sidecar_path(out).filename().string()},
                       {"total_sigma", r.truth.total_sigma()},
                       {"mtf_scalar", r.truth.combined_mtf().scalar()}});
  }
  Json manifest;
  manifest["recipe"] = a.recipe;
  manifest["count"] = images.size();
  manifest["images"] = entries;
  write_file_atomic(fs::path(a.output) / "manifest.json", json_with_run(run, manifest));
  return {{{"images", images.size()}, {"output", a.output}},
          "corrupted " + std::to_string(images.size()) + " images into " + a.output};
}

struct EstimateArgs {
  std::string input, output, reference;
  std::vector<std::string> noise{"pca"};
  std::vector<std::string> blur;
  std::uint64_t seed = 0;
};

Summary cmd_estimate(const EstimateArgs& a, const Json& run) {
  const auto& reg = EstimatorRegistry::global();
  std::vector<std::shared_ptr<const NoiseEstimator>> noise;
  std::vector<std::shared_ptr<const BlurEstimator>> blur;
  for (const std::string& id : a.noise) noise.push_back(reg.noise(id));
  for (const std::string& id : a.blur) blur.push_back(blur_estimator(id, a.reference));
  const bool needs_truth = std::find(a.blur.begin(), a.blur.end(), "mtf-oracle") != a.blur.end();

  std::string lines = Json{{"run", run}}.dump() + "\n";
  std::size_t records = 0;
  for (const fs::path& p : list_inputs(a.input)) {
    const GrayImage img = load_gray(p);
    GroundTruthBundle truth;
    if (needs_truth) truth = load_sidecar(p);
    const std::string name = p.filename().string();
    for (const auto& est : noise) {
      for (const NoiseEstimate& e : estimate_noise_tiles(img, *est)) {
        Json j = to_json(e);
        j["image"] = name;
        lines += j.dump() + "\n";
        ++records;
      }
    }
    for (const auto& est : blur) {
      for (const MtfEstimate& e : estimate_frame_mtf(img, *est, EstimationContext{needs_truth ? &truth : nullptr})) {
        Json j = to_json(e);
        j["image"] = name;
        lines += j.dump() + "\n";
        ++records;
      }
    }
  }
  if (a.output.empty()) {
    std::cout << lines;
  } else {
    write_file_atomic(a.output, lines);
  }
  return {{{"records", records}, {"output", a.output}}, "wrote " + std::to_string(records) + " estimate records"};
}

struct EvaluateArgs {
  std::string input, output, reference;
  std::vector<std::string> noise{"bf", "pca"};
  std::vector<std::string> blur{"mtf-oracle"};
  std::uint64_t seed = 0;
};

Summary cmd_evaluate(const EvaluateArgs& a, const Json& run) {
  const auto& reg = EstimatorRegistry::global();
  std::vector<std::shared_ptr<const NoiseEstimator>> noise;
  std::vector<std::shared_ptr<const BlurEstimator>> blur;
  for (const std::string& id : a.noise) noise.push_back(reg.noise(id));
  for (const std::string& id : a.blur) blur.push_back(blur_estimator(id, a.reference));

  std::map<std::pair<std::string, std::string>, std::vector<double>> amae_scores;
  std::vector<std::string> columns;
  // (noise kind, sigma, method) -> estimates
  std::map<std::tuple<std::string, long, std::string>, std::vector<double>> sigma_hats;
  const std::vector<fs::path> images = list_images(a.input);
  for (const fs::path& p : images) {
    const GroundTruthBundle truth = load_sidecar(p);
    const GrayImage img = load_gray(p);
    const std::string bkey = blur_key(truth);
    if (!bkey.empty()) {
      if (std::find(columns.begin(), columns.end(), bkey) == columns.end()) columns.push_back(bkey);
      const MtfSamples gt = truth.combined_mtf();
      for (const auto& est : blur) {
        for (const MtfEstimate& e : estimate_frame_mtf(img, *est, EstimationContext{&truth})) {
          amae_scores[{est->id(), bkey}].push_back(amae(e.mtf, gt).amae);
        }
      }
    }
    const long sigma = std::lround(truth.total_sigma());
    for (const auto& est : noise) {
      auto& bucket = sigma_hats[{noise_key(truth), sigma, est->id()}];
      for (const NoiseEstimate& e : estimate_noise_tiles(img, *est)) bucket.push_back(e.sigma_hat);
    }
  }

  fs::create_directories(a.output);
  AmaeTable table;
  table.columns = columns;
  for (const auto& [key, scores] : amae_scores) table.set(key.first, key.second, robust_stats(scores).median);
  write_file_atomic(fs::path(a.output) / "amae.csv", csv_with_run(run, table.to_csv()));

  std::string csv = "noise,sigma,method,min,median,max,n\n";
  for (const auto& [key, hats] : sigma_hats) {
    const RobustStats s = robust_stats(hats);
    csv += std::get<0>(key) + "," + std::to_string(std::get<1>(key)) + "," + std::get<2>(key) + "," +
           fmt("%.3f", s.min) + "," + fmt("%.3f", s.median) + "," + fmt("%.3f", s.max) + "," +
           std::to_string(s.n_samples) + "\n";
  }
  write_file_atomic(fs::path(a.output) / "noise.csv", csv_with_run(run, csv));
  return {{{"images", images.size()}, {"blur_cells", amae_scores.size()}, {"noise_rows", sigma_hats.size()},
           {"output", a.output}},
          "evaluated " + std::to_string(images.size()) + " images into " + a.output};
}

struct BuildIopcArgs {
  std::string input, annotations, detections, output, blur_kind = "lin-motion", object_class = "car";
  std::string noise = "pca", blur = "mtf-oracle";
  int scenes = 8, size = 384;
  std::uint64_t seed = 0;
};

std::vector<LabeledImage> labeled_inputs(const BuildIopcArgs& a) {
  if (a.input.empty()) return scene_corpus(a.scenes, a.size, split_seed(a.seed, 1));
  if (a.annotations.empty()) throw InvalidArgument("--input needs --annotations");
  std::map<std::string, std::vector<DetBox>> boxes;
  for (auto& [id, box] : read_detection_lines(a.annotations)) boxes[id].push_back(box);
  std::vector<LabeledImage> out;
  for (const fs::path& p : list_images(a.input)) {
    const std::string id = p.stem().string();
    auto it = boxes.find(id);
    if (it == boxes.end()) throw DataError("no annotations for image " + id);
    out.push_back({id, load_gray(p), it->second});
  }
  return out;
}

Summary cmd_build_iopc(const BuildIopcArgs& a, const Json& run) {
  IopcGridSpec spec;
  if (a.blur_kind == "defocus") {
    spec.blur = KernelType::kDefocus;
  } else if (a.blur_kind != "lin-motion") {
    throw InvalidArgument("blur-kind must be lin-motion or defocus");
  }
  const auto& reg = EstimatorRegistry::global();
  const auto noise = reg.noise(a.noise);
  const auto blur = reg.blur(a.blur);
  const std::vector<LabeledImage> images = labeled_inputs(a);
  std::unique_ptr<Detector> detector;
  if (a.detections.empty()) {
    detector = std::make_unique<SyntheticDetector>(split_seed(a.seed, 2));
  } else {
    detector = std::make_unique<FileDetector>(a.detections);
  }
  const IopcBuild b = build_iopc(images, spec, *noise, *blur, *detector, split_seed(a.seed, 3), a.object_class);
  write_file_atomic(a.output, json_with_run(run, Json::parse(iopc_to_json(b.iopc))));
  fs::path csv = a.output;
  csv.replace_extension(".csv");
  write_file_atomic(csv, csv_with_run(run, iopc_to_csv(b.iopc)));
  return {{{"images", images.size()}, {"populated", b.iopc.populated()}, {"output", a.output}},
          "IOPC with " + std::to_string(b.iopc.populated()) + " populated cells written to " + a.output};
}

struct ControlArgs {
  std::string iopc, output;
  double sigma = 0.0, mtf = 1.0, exposure = 0.01, iso = 1.0;
  double target_extent = 0.0;
  CameraBounds bounds;
  std::uint64_t seed = 0;
};

Summary cmd_control(const ControlArgs& a, const Json& run) {
  a.bounds.validate();
  std::ifstream in(a.iopc);
  if (!in) throw DataError("cannot read IOPC file: " + a.iopc);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const Iopc iopc = iopc_from_json(text);
  const IopcMetadata& meta = iopc.metadata();
  const CalibrationTable table = meta.blur_extents.empty()
                                     ? CalibrationTable::linear_motion({0, 3, 7, 11, 15, 21}, meta.mtf_frequency)
                                     : CalibrationTable::linear_motion(meta.blur_extents, meta.mtf_frequency);
  AlphaDecision decision;
  if (a.target_extent > 0.0) {
    decision = alpha_for_target(table.mtf_to_blur_extent(a.mtf), a.target_extent);
  } else {
    decision = optimal_alpha(iopc, a.sigma, a.mtf, table);
  }
  const ActionResult action = apply_action(CameraState{a.exposure, a.iso}, decision.alpha, decision.direction, a.bounds);
  Json record = Json::parse(action_record_json(decision, action));
  if (a.output.empty()) {
    // One line, so stdout stays JSON-lines alongside a --json summary.
    Json line{{"run", run}};
    for (auto& [k, v] : record.items()) line[k] = v;
    std::cout << line.dump() << "\n";
  } else {
    write_file_atomic(a.output, json_with_run(run, record));
  }
  return {record, "alpha " + fmt("%g", action.applied_alpha) + " " + to_string(decision.direction)};
}

struct ReproduceArgs {
  ReproduceConfig config;
  std::string output;
};

Summary cmd_reproduce(const ReproduceArgs& a, const Json& run) {
  const std::vector<Artifact> artifacts = reproduce(a.config);
  fs::create_directories(a.output);
  Json names = Json::array();
  for (const Artifact& art : artifacts) {
    const fs::path p = fs::path(a.output) / art.name;
    if (p.extension() == ".json") {
      write_file_atomic(p, json_with_run(run, Json::parse(art.contents)));
    } else {
      write_file_atomic(p, csv_with_run(run, art.contents));
    }
    names.push_back(art.name);
  }
  return {{{"id", a.config.id}, {"artifacts", names}, {"output", a.output}},
          a.config.id + ": " + std::to_string(artifacts.size()) + " artifacts in " + a.output};
}

void emit_error(bool json, int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  if (json) std::cout << Json{{"status", "error"}, {"exit_code", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera image health: corruption, estimation, performance curves and control"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with per-subcommand option values; flags win");
  bool json = false;
  app.add_flag("--json", json, "Print the summary line as JSON");

  auto seed_option = [](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "Root seed")->required();
  };

  CorruptArgs corrupt;
  CLI::App* sc = app.add_subcommand("corrupt", "Apply a corruption recipe to every image of a directory");
  sc->add_option("--input", corrupt.input, "Directory of PGM/PNG images")->required();
  sc->add_option("--output", corrupt.output, "Output directory")->required();
  sc->add_option("--recipe", corrupt.recipe, "Recipe, e.g. \"photon:10 > lin-motion:3@90\"")->required();
  sc->add_option("--constants", corrupt.constants, "JSON file with sensor constants");
  seed_option(sc, corrupt.seed);

  EstimateArgs estimate;
  CLI::App* se = app.add_subcommand("estimate", "Per-patch noise and MTF estimates as JSON lines");
  se->add_option("--input", estimate.input, "Image or directory")->required();
  se->add_option("--output", estimate.output, "JSON-lines file (stdout when omitted)");
  se->add_option("--noise", estimate.noise, "Noise estimator ids")->capture_default_str();
  se->add_option("--blur", estimate.blur, "Blur estimator ids");
  se->add_option("--reference", estimate.reference, "Directory of sharp images for mtf-spectral");
  seed_option(se, estimate.seed);

  EvaluateArgs evaluate;
  CLI::App* sv = app.add_subcommand("evaluate", "AMAE and noise-error tables over a corrupted set");
  sv->add_option("--input", evaluate.input, "Directory written by corrupt")->required();
  sv->add_option("--output", evaluate.output, "Output directory")->required();
  sv->add_option("--noise", evaluate.noise, "Noise estimator ids")->capture_default_str();
  sv->add_option("--blur", evaluate.blur, "Blur estimator ids")->capture_default_str();
  sv->add_option("--reference", evaluate.reference, "Directory of sharp images for mtf-spectral");
  seed_option(sv, evaluate.seed);

  BuildIopcArgs build;
  CLI::App* sb = app.add_subcommand("build-iopc", "Build an AP performance curve over the sigma x MTF grid");
  sb->add_option("--output", build.output, "IOPC JSON file; a CSV matrix is written next to it")->required();
  sb->add_option("--input", build.input, "Directory of images (synthetic scenes when omitted)");
  sb->add_option("--annotations", build.annotations, "JSON-lines ground-truth boxes keyed by image stem");
  sb->add_option("--detections", build.detections, "JSON-lines detections replayed instead of the synthetic detector");
  sb->add_option("--scenes", build.scenes, "Synthetic scene count")->capture_default_str();
  sb->add_option("--size", build.size, "Synthetic scene side in pixels")->capture_default_str();
  sb->add_option("--blur-kind", build.blur_kind, "lin-motion or defocus")->capture_default_str();
  sb->add_option("--class", build.object_class, "Object class")->capture_default_str();
  sb->add_option("--noise", build.noise, "Noise estimator id")->capture_default_str();
  sb->add_option("--blur", build.blur, "Blur estimator id")->capture_default_str();
  seed_option(sb, build.seed);

  ControlArgs control;
  CLI::App* st = app.add_subcommand("control", "Exposure/gain action from an IOPC and current estimates");
  st->add_option("--iopc", control.iopc, "IOPC JSON file")->required();
  st->add_option("--sigma", control.sigma, "Current noise estimate, DN")->required();
  st->add_option("--mtf", control.mtf, "Current blur scalar")->required();
  st->add_option("--exposure", control.exposure, "Current exposure time, s")->required();
  st->add_option("--iso", control.iso, "Current gain")->required();
  st->add_option("--target-extent", control.target_extent, "Aim for this blur extent instead of maximizing AP");
  st->add_option("--t-min", control.bounds.t_min)->capture_default_str();
  st->add_option("--t-max", control.bounds.t_max)->capture_default_str();
  st->add_option("--iso-min", control.bounds.iso_min)->capture_default_str();
  st->add_option("--iso-max", control.bounds.iso_max)->capture_default_str();
  st->add_option("--output", control.output, "Action record file (stdout when omitted)");
  seed_option(st, control.seed);

  ReproduceArgs repro;
  CLI::App* sr = app.add_subcommand("reproduce", "Regenerate a table or figure bundle");
  sr->add_option("--id", repro.config.id, "Recipe id")->required()->check(CLI::IsMember(reproduce_ids()));
  sr->add_option("--output", repro.output, "Output directory")->required();
  sr->add_option("--images", repro.config.images, "Corpus size")->capture_default_str();
  sr->add_option("--size", repro.config.size, "Image side in pixels")->capture_default_str();
  sr->add_option("--noise", repro.config.noise_estimator, "Noise estimator id (fig9-heat, fig10-walkthrough)")->capture_default_str();
  sr->add_option("--blur", repro.config.blur_estimator, "Blur estimator id (fig9-heat, fig10-walkthrough)")->capture_default_str();
  seed_option(sr, repro.config.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(json, kExitConfig, e.what());
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Json run = run_config(*sub);
  try {
    Summary s;
    if (sub == sc) s = cmd_corrupt(corrupt, run);
    if (sub == se) s = cmd_estimate(estimate, run);
    if (sub == sv) s = cmd_evaluate(evaluate, run);
    if (sub == sb) s = cmd_build_iopc(build, run);
    if (sub == st) s = cmd_control(control, run);
    if (sub == sr) s = cmd_reproduce(repro, run);
    if (json) {
      Json line{{"status", "ok"}, {"command", sub->get_name()}, {"seed", run["seed"]}};
      for (auto& [k, v] : s.fields.items()) line[k] = v;
      std::cout << line.dump() << "\n";
    } else {
      std::cerr << s.text << "\n";
    }
    return 0;
  } catch (const InvalidArgument& e) {
    emit_error(json, kExitConfig, e.what());
    return kExitConfig;
  } catch (const DataError& e) {
    emit_error(json, kExitData, e.what());
    return kExitData;
  } catch (const RangeError& e) {
    emit_error(json, kExitData, e.what());
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    emit_error(json, kExitData, e.what());
    return kExitData;
  }
}
