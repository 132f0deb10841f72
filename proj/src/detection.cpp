#include "camhealth/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <random>

#include "camhealth/error.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {

double iou(const DetBox& a, const DetBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double average_precision(const std::vector<ImageDetections>& images, double iou_threshold) {
  struct Ranked {
    double conf;
    std::size_t image;
    std::size_t index;
  };
  std::vector<Ranked> ranked;
  std::size_t n_gt = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    n_gt += images[i].gts.size();
    for (std::size_t j = 0; j < images[i].dets.size(); ++j) {
      ranked.push_back({images[i].dets[j].confidence.value_or(1.0), i, j});
    }
  }
  if (n_gt == 0) return ranked.empty() ? 1.0 : 0.0;
  if (ranked.empty()) return 0.0;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.conf > b.conf; });

  std::vector<std::vector<bool>> used(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) used[i].assign(images[i].gts.size(), false);

  std::vector<double> precision;
  std::vector<double> recall;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const ImageDetections& im = images[ranked[k].image];
    const DetBox& d = im.dets[ranked[k].index];
    double best = iou_threshold;
    std::optional<std::size_t> match;
    for (std::size_t g = 0; g < im.gts.size(); ++g) {
      if (used[ranked[k].image][g]) continue;
      const double o = iou(d, im.gts[g]);
      if (o >= best && (!match || o > best)) {
        best = o;
        match = g;
      }
    }
    if (match) {
      used[ranked[k].image][*match] = true;
      ++tp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(k + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  for (std::size_t k = precision.size() - 1; k > 0; --k) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < precision.size(); ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return std::clamp(ap, 0.0, 1.0);
}

double average_precision(const std::vector<DetBox>& dets, const std::vector<DetBox>& gts,
                         double iou_threshold) {
  return average_precision(std::vector<ImageDetections>{{dets, gts}}, iou_threshold);
}

double synthetic_detection_probability(const SyntheticQuality& q) {
  const double blur = 1.0 / (1.0 + std::exp(-(q.mtf - 0.6) / 0.07));
  return blur * std::exp(-(q.sigma / 60.0) * (q.sigma / 60.0));
}

double synthetic_false_positive_rate(const SyntheticQuality& q) {
  return 0.2 + 2.0 * (q.sigma / 25.0) * (q.sigma / 25.0);
}

std::vector<DetBox> synthetic_detections(const std::vector<DetBox>& gts, const SyntheticQuality& q,
                                         int image_width, int image_height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = synthetic_detection_probability(q);
  std::vector<DetBox> out;
  for (const DetBox& g : gts) {
    const double hit = u(rng);
    const double conf = p * (0.92 + 0.08 * u(rng));
    if (hit < p) {
      DetBox d = g;
      d.confidence = conf;
      out.push_back(d);
    }
  }
  std::poisson_distribution<int> fp_count(synthetic_false_positive_rate(q));
  const int n_fp = fp_count(rng);
  const std::string label = gts.empty() ? std::string("object") : gts.front().label;
  for (int i = 0; i < n_fp; ++i) {
    DetBox d;
    d.label = label;
    d.w = 16.0 + 48.0 * u(rng);
    d.h = 16.0 + 48.0 * u(rng);
    d.x = u(rng) * std::max(0.0, image_width - d.w);
    d.y = u(rng) * std::max(0.0, image_height - d.h);
    d.confidence = 0.6 * u(rng);
    out.push_back(d);
  }
  return out;
}

std::vector<DetBox> SyntheticDetector::detect(const GrayImage& img, const SceneInfo& scene) const {
  SyntheticQuality q;
  if (scene.truth != nullptr) {
    q.sigma = scene.truth->total_sigma();
    q.mtf = scene.truth->combined_mtf().scalar();
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scene.image_id) h = (h ^ c) * 0x100000001b3ULL;
  const std::uint64_t s = split_seed(split_seed(seed_, h), scene.truth ? scene.truth->seed : 0);
  return synthetic_detections(scene.gts, q, img.width(), img.height(), s);
}

std::vector<std::pair<std::string, DetBox>> read_detection_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read detections: " + path.string());
  std::vector<std::pair<std::string, DetBox>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      DetBox d;
      d.label = j.at("class").get<std::string>();
      const auto& b = j.at("box");
      if (!b.is_array() || b.size() != 4) throw DataError("box must be [x, y, w, h]");
      d.x = b[0].get<double>();
      d.y = b[1].get<double>();
      d.w = b[2].get<double>();
      d.h = b[3].get<double>();
      if (d.w <= 0.0 || d.h <= 0.0) throw DataError("box width and height must be positive");
      if (j.contains("confidence") && !j["confidence"].is_null()) {
        const double c = j["confidence"].get<double>();
        if (c < 0.0 || c > 1.0) throw DataError("confidence outside [0, 1]");
        d.confidence = c;
      }
      out.emplace_back(j.at("image").get<std::string>(), d);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string detection_lines(const std::vector<std::pair<std::string, DetBox>>& records) {
  std::string out;
  for (const auto& [image, d] : records) {
    nlohmann::ordered_json j;
    j["image"] = image;
    j["class"] = d.label;
    j["box"] = {d.x, d.y, d.w, d.h};
    if (d.confidence) j["confidence"] = *d.confidence;
    out += j.dump() + "\n";
  }
  return out;
}

FileDetector::FileDetector(const std::filesystem::path& path) : source_(path.filename().string()) {
  for (auto& [image, d] : read_detection_lines(path)) by_image_[image].push_back(std::move(d));
}

std::vector<DetBox> FileDetector::detect(const GrayImage&, const SceneInfo& scene) const {
  auto it = by_image_.find(scene.image_id);
  return it == by_image_.end() ? std::vector<DetBox>{} : it->second;
}

}  // namespace camhealth
