#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "camhealth/image.hpp"
#include "camhealth/pipeline.hpp"

namespace camhealth {

struct DetBox {
  std::string label;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  std::optional<double> confidence;  // absent for ground truth

  bool operator==(const DetBox&) const = default;
};

double iou(const DetBox& a, const DetBox& b);

// Single-class AP: detections ranked by confidence (stable for ties),
// greedily matched to the unmatched ground truth of highest IoU above the
// threshold, scored as the area under the monotone precision envelope.
// No GTs and no detections gives 1; otherwise an empty side gives 0.
double average_precision(const std::vector<DetBox>& dets, const std::vector<DetBox>& gts,
                         double iou_threshold = 0.5);

// Detections of several images pooled into one ranking.
struct ImageDetections {
  std::vector<DetBox> dets;
  std::vector<DetBox> gts;
};
double average_precision(const std::vector<ImageDetections>& images, double iou_threshold = 0.5);

// What a detector may know about the frame it is shown. File-backed and
// real detectors ignore it; the synthetic detector reads the applied
// corruption from it.
struct SceneInfo {
  std::string image_id;
  std::vector<DetBox> gts;
  const GroundTruthBundle* truth = nullptr;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::string id() const = 0;
  // False for detectors that must not be called from several threads.
  virtual bool concurrent() const { return true; }
  virtual std::vector<DetBox> detect(const GrayImage& img, const SceneInfo& scene) const = 0;
};

// Quality-driven stand-in detector. A GT box is found with probability
//   p = 1/(1 + exp(-(mtf - 0.6)/0.07)) * exp(-(sigma/60)^2)
// at confidence p * (0.92 + 0.08 u); false positives arrive as Poisson
// with mean 0.2 + 2 (sigma/25)^2 at confidence 0.6 u. Blur sensitivity
// dominates noise sensitivity over the protocol ranges.
struct SyntheticQuality {
  double sigma = 0.0;
  double mtf = 1.0;
};

double synthetic_detection_probability(const SyntheticQuality& q);
double synthetic_false_positive_rate(const SyntheticQuality& q);

std::vector<DetBox> synthetic_detections(const std::vector<DetBox>& gts, const SyntheticQuality& q,
                                         int image_width, int image_height, std::uint64_t seed);

class SyntheticDetector final : public Detector {
 public:
  explicit SyntheticDetector(std::uint64_t seed) : seed_(seed) {}
  std::string id() const override { return "synthetic"; }
  // Reads sigma and the MTF scalar from scene.truth (clean if absent).
  std::vector<DetBox> detect(const GrayImage& img, const SceneInfo& scene) const override;

 private:
  std::uint64_t seed_;
};

// JSON-lines records {"image": id, "class": c, "box": [x, y, w, h],
// "confidence": p}; confidence is omitted for ground truth.
std::vector<std::pair<std::string, DetBox>> read_detection_lines(const std::filesystem::path& path);
std::string detection_lines(const std::vector<std::pair<std::string, DetBox>>& records);

// Replays detections produced by an external tool, keyed by image id.
class FileDetector final : public Detector {
 public:
  explicit FileDetector(const std::filesystem::path& path);
  std::string id() const override { return "file:" + source_; }
  std::vector<DetBox> detect(const GrayImage& img, const SceneInfo& scene) const override;

 private:
  std::string source_;
  std::map<std::string, std::vector<DetBox>> by_image_;
};

}  // namespace camhealth
