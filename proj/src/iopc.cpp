#include "camhealth/iopc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <mutex>

#include "camhealth/error.hpp"
#include "camhealth/metrics.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {
namespace {

void require_increasing(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw InvalidArgument(std::string("IOPC ") + name + " grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw InvalidArgument(std::string("IOPC ") + name + " grid must be strictly increasing");
  }
}

std::size_t nearest(const std::vector<double>& g, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (std::abs(g[i] - v) < std::abs(g[best] - v)) best = i;
  }
  return best;
}

// Segment index and fraction of v on grid g; v must lie inside.
std::pair<std::size_t, double> locate(const std::vector<double>& g, double v) {
  if (g.size() == 1) return {0, 0.0};
  std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), v) - g.begin());
  i = std::clamp<std::size_t>(i, 1, g.size() - 1) - 1;
  return {i, (v - g[i]) / (g[i + 1] - g[i])};
}

bool overlaps(const Patch& p, const DetBox& b) {
  return p.x() < b.x + b.w && b.x < p.x() + p.size() && p.y() < b.y + b.h && b.y < p.y() + p.size();
}

double median_of(std::vector<double> v) { return robust_stats(v).median; }

}  // namespace

Iopc::Iopc(std::vector<double> sigma_grid, std::vector<double> mtf_grid, IopcMetadata meta)
    : sigma_grid_(std::move(sigma_grid)), mtf_grid_(std::move(mtf_grid)), meta_(std::move(meta)) {
  require_increasing(sigma_grid_, "sigma");
  require_increasing(mtf_grid_, "MTF");
  cells_.resize(sigma_grid_.size() * mtf_grid_.size());
}

const IopcCell& Iopc::cell(std::size_t i, std::size_t j) const {
  if (i >= sigma_grid_.size() || j >= mtf_grid_.size()) throw RangeError("IOPC cell index out of range");
  return cells_[i * mtf_grid_.size() + j];
}

void Iopc::set_cell(std::size_t i, std::size_t j, double ap, int count) {
  if (i >= sigma_grid_.size() || j >= mtf_grid_.size()) throw RangeError("IOPC cell index out of range");
  if (!(ap >= 0.0 && ap <= 1.0)) throw InvalidArgument("IOPC AP must lie in [0, 1]");
  if (count < 0) throw InvalidArgument("IOPC cell count must be non-negative");
  cells_[i * mtf_grid_.size() + j] = {count > 0 ? ap : 0.0, count};
}

void Iopc::insert(double sigma, double mtf, double ap, int count) {
  if (!(ap >= 0.0 && ap <= 1.0)) throw InvalidArgument("IOPC AP must lie in [0, 1]");
  if (count < 1) throw InvalidArgument("IOPC tuple weight must be positive");
  IopcCell& c = cells_[nearest(sigma_grid_, sigma) * mtf_grid_.size() + nearest(mtf_grid_, mtf)];
  c.ap = (c.ap * c.count + ap * count) / (c.count + count);
  c.count += count;
}

std::size_t Iopc::populated() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(),
                                                 [](const IopcCell& c) { return !c.empty(); }));
}

bool Iopc::operator==(const Iopc& o) const {
  if (sigma_grid_ != o.sigma_grid_ || mtf_grid_ != o.mtf_grid_) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k].count != o.cells_[k].count || cells_[k].ap != o.cells_[k].ap) return false;
  }
  return true;
}

bool in_hull(const Iopc& iopc, double sigma, double mtf) {
  const auto& s = iopc.sigma_grid();
  const auto& m = iopc.mtf_grid();
  return sigma >= s.front() && sigma <= s.back() && mtf >= m.front() && mtf <= m.back();
}

double lookup_ap(const Iopc& iopc, double sigma, double mtf) {
  if (!std::isfinite(sigma) || !std::isfinite(mtf) || !in_hull(iopc, sigma, mtf)) {
    throw RangeError("IOPC query outside the grid hull");
  }
  const auto [i, t] = locate(iopc.sigma_grid(), sigma);
  const auto [j, s] = locate(iopc.mtf_grid(), mtf);
  const std::size_t ni = iopc.sigma_grid().size();
  const std::size_t nj = iopc.mtf_grid().size();
  double ap = 0.0;
  for (int di = 0; di <= 1; ++di) {
    for (int dj = 0; dj <= 1; ++dj) {
      const double w = (di ? t : 1.0 - t) * (dj ? s : 1.0 - s);
      if (w == 0.0) continue;
      const std::size_t ci = std::min(i + static_cast<std::size_t>(di), ni - 1);
      const std::size_t cj = std::min(j + static_cast<std::size_t>(dj), nj - 1);
      const IopcCell& c = iopc.cell(ci, cj);
      if (c.empty()) throw RangeError("IOPC query touches an empty cell");
      ap += w * c.ap;
    }
  }
  return ap;
}

std::string iopc_to_json(const Iopc& iopc) {
  const IopcMetadata& m = iopc.metadata();
  nlohmann::ordered_json j;
  j["metadata"] = {{"detector_id", m.detector_id},
                   {"object_class", m.object_class},
                   {"recipe", m.recipe},
                   {"noise_estimator", m.noise_estimator},
                   {"blur_estimator", m.blur_estimator},
                   {"mtf_frequency", m.mtf_frequency},
                   {"seed", m.seed},
                   {"blur_extents", m.blur_extents}};
  j["sigma_grid"] = iopc.sigma_grid();
  j["mtf_grid"] = iopc.mtf_grid();
  nlohmann::ordered_json ap = nlohmann::ordered_json::array();
  nlohmann::ordered_json count = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < iopc.sigma_grid().size(); ++i) {
    nlohmann::ordered_json ra = nlohmann::ordered_json::array();
    nlohmann::ordered_json rc = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < iopc.mtf_grid().size(); ++k) {
      const IopcCell& c = iopc.cell(i, k);
      ra.push_back(c.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.ap));
      rc.push_back(c.count);
    }
    ap.push_back(ra);
    count.push_back(rc);
  }
  j["ap"] = ap;
  j["count"] = count;
  return j.dump(2) + "\n";
}

Iopc iopc_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    IopcMetadata m;
    if (j.contains("metadata")) {
      const auto& md = j["metadata"];
      m.detector_id = md.value("detector_id", "");
      m.object_class = md.value("object_class", "");
      m.recipe = md.value("recipe", "");
      m.noise_estimator = md.value("noise_estimator", "");
      m.blur_estimator = md.value("blur_estimator", "");
      m.mtf_frequency = md.value("mtf_frequency", kDefaultScalarFrequency);
      m.seed = md.value("seed", std::uint64_t{0});
      m.blur_extents = md.value("blur_extents", std::vector<double>{});
    }
    Iopc iopc(j.at("sigma_grid").get<std::vector<double>>(), j.at("mtf_grid").get<std::vector<double>>(), m);
    const auto& ap = j.at("ap");
    const auto& count = j.at("count");
    if (ap.size() != iopc.sigma_grid().size() || count.size() != iopc.sigma_grid().size()) {
      throw DataError("IOPC cell rows do not match the sigma grid");
    }
    for (std::size_t i = 0; i < ap.size(); ++i) {
      if (ap[i].size() != iopc.mtf_grid().size() || count[i].size() != iopc.mtf_grid().size()) {
        throw DataError("IOPC cell columns do not match the MTF grid");
      }
      for (std::size_t k = 0; k < ap[i].size(); ++k) {
        const int c = count[i][k].get<int>();
        if (c > 0 && ap[i][k].is_null()) throw DataError("IOPC cell has a count but no AP");
        iopc.set_cell(i, k, c > 0 ? ap[i][k].get<double>() : 0.0, c);
      }
    }
    return iopc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed IOPC file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid IOPC file: ") + e.what());
  }
}

std::string iopc_to_csv(const Iopc& iopc) {
  char buf[32];
  std::string out = "sigma\\mtf";
  for (double m : iopc.mtf_grid()) {
    std::snprintf(buf, sizeof buf, ",%.4f", m);
    out += buf;
  }
  out += "\n";
  for (std::size_t i = 0; i < iopc.sigma_grid().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g", iopc.sigma_grid()[i]);
    out += buf;
    for (std::size_t k = 0; k < iopc.mtf_grid().size(); ++k) {
      const IopcCell& c = iopc.cell(i, k);
      if (c.empty()) {
        out += ",";
      } else {
        std::snprintf(buf, sizeof buf, ",%.4f", c.ap);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

Kernel grid_kernel(const IopcGridSpec& spec, double extent) {
  if (extent == 0.0) return Kernel::identity();
  switch (spec.blur) {
    case KernelType::kLinearMotion:
      return linear_motion_kernel(extent, spec.angle_deg);
    case KernelType::kDefocus:
      return defocus_kernel(static_cast<int>(extent));
    default:
      throw InvalidArgument("IOPC grids support linear motion and defocus blur");
  }
}

CorruptionRecipe grid_recipe(const IopcGridSpec& spec, double sigma, double extent,
                             std::uint64_t seed) {
  CorruptionRecipe r;
  r.stages.push_back(BlurStage{grid_kernel(spec, extent)});
  if (sigma > 0.0) r.stages.push_back(NoiseStage{NoiseConfig::sensor(sigma, seed)});
  return r;
}

PatchEstimates estimate_patches(const GrayImage& img, const std::vector<DetBox>& gts,
                                const NoiseEstimator& noise, const BlurEstimator& blur,
                                const EstimationContext& ctx) {
  auto touching = [&](int size) {
    std::vector<Patch> out;
    for (const Patch& p : tile_patches(img, size, size)) {
      if (std::any_of(gts.begin(), gts.end(), [&](const DetBox& b) { return overlaps(p, b); })) {
        out.push_back(p);
      }
    }
    if (out.empty()) throw DataError("no estimation patch overlaps a ground-truth box");
    return out;
  };
  PatchEstimates out;
  for (const Patch& p : touching(kNoisePatchSize)) out.sigmas.push_back(noise.estimate(p).sigma_hat);
  const std::vector<Patch> blur_patches = touching(kBlurPatchSize);
  for (std::size_t b = 0; b < blur_patches.size(); b += 4) {
    const std::size_t n = std::min<std::size_t>(4, blur_patches.size() - b);
    const MtfEstimate e = blur.estimate(std::span<const Patch>(blur_patches.data() + b, n), ctx);
    out.mtfs.push_back(e.mtf.scalar());
  }
  return out;
}

PatchMedians estimate_medians(const GrayImage& img, const std::vector<DetBox>& gts,
                              const NoiseEstimator& noise, const BlurEstimator& blur,
                              const EstimationContext& ctx) {
  const PatchEstimates e = estimate_patches(img, gts, noise, blur, ctx);
  return {median_of(e.sigmas), median_of(e.mtfs)};
}

IopcBuild build_iopc(const std::vector<LabeledImage>& images, const IopcGridSpec& spec,
                     const NoiseEstimator& noise, const BlurEstimator& blur,
                     const Detector& detector, std::uint64_t seed,
                     const std::string& object_class) {
  const bool any_gt = std::any_of(images.begin(), images.end(), [&](const LabeledImage& im) {
    return std::any_of(im.gts.begin(), im.gts.end(),
                       [&](const DetBox& b) { return b.label == object_class; });
  });
  if (!any_gt) throw DataError("no ground-truth boxes of class '" + object_class + "'");

  std::vector<double> sigma_axis = spec.sigmas;
  std::sort(sigma_axis.begin(), sigma_axis.end());
  std::vector<double> mtf_axis;
  for (double d : spec.extents) mtf_axis.push_back(kernel_mtf(grid_kernel(spec, d)).scalar());
  std::sort(mtf_axis.begin(), mtf_axis.end());

  IopcMetadata meta;
  meta.detector_id = detector.id();
  meta.object_class = object_class;
  meta.recipe = to_string(spec.blur) + " > sensor";
  meta.noise_estimator = noise.id();
  meta.blur_estimator = blur.id();
  meta.seed = seed;
  meta.blur_extents = spec.extents;
  IopcBuild out{Iopc(sigma_axis, mtf_axis, meta), {}};

  const std::size_t ns = spec.sigmas.size();
  const std::size_t nd = spec.extents.size();
  std::vector<IopcSample> samples(ns * nd);
  std::mutex detector_mutex;
  const long total = static_cast<long>(ns * nd);

#pragma omp parallel for schedule(dynamic)
  for (long g = 0; g < total; ++g) {
    const std::size_t is = static_cast<std::size_t>(g) / nd;
    const std::size_t id = static_cast<std::size_t>(g) % nd;
    IopcSample& s = samples[static_cast<std::size_t>(g)];
    s.applied_sigma = spec.sigmas[is];
    s.applied_extent = spec.extents[id];
    std::vector<ImageDetections> pooled;
    std::vector<double> sig;
    std::vector<double> mtf;
    for (std::size_t k = 0; k < images.size(); ++k) {
      const LabeledImage& im = images[k];
      std::vector<DetBox> gts;
      for (const DetBox& b : im.gts) {
        if (b.label == object_class) gts.push_back(b);
      }
      const std::uint64_t point_seed = split_seed(split_seed(seed, static_cast<std::uint64_t>(g)), k);
      CorruptionResult r = corrupt_pipeline(im.image, grid_recipe(spec, s.applied_sigma, s.applied_extent, point_seed));
      r.truth.seed = point_seed;
      SceneInfo info{im.id, gts, &r.truth};
      std::vector<DetBox> dets;
      if (detector.concurrent()) {
        dets = detector.detect(r.image, info);
      } else {
        std::lock_guard<std::mutex> lock(detector_mutex);
        dets = detector.detect(r.image, info);
      }
      std::erase_if(dets, [&](const DetBox& d) { return d.label != object_class; });
      pooled.push_back({std::move(dets), gts});
      if (gts.empty()) continue;
      const PatchEstimates e = estimate_patches(r.image, gts, noise, blur, EstimationContext{&r.truth});
      sig.insert(sig.end(), e.sigmas.begin(), e.sigmas.end());
      mtf.insert(mtf.end(), e.mtfs.begin(), e.mtfs.end());
    }
    s.ap = average_precision(pooled);
    s.sigma_median = median_of(sig);
    s.mtf_median = median_of(mtf);
  }

  for (const IopcSample& s : samples) out.iopc.insert(s.sigma_median, s.mtf_median, s.ap);
  out.samples = std::move(samples);
  return out;
}

}  // namespace camhealth
