#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camhealth/detection.hpp"
#include "camhealth/estimators.hpp"
#include "camhealth/kernel.hpp"

namespace camhealth {

struct IopcCell {
  double ap = 0.0;
  int count = 0;  // tuples averaged into this cell; 0 marks it empty

  bool empty() const { return count == 0; }
};

struct IopcMetadata {
  std::string detector_id;
  std::string object_class;
  std::string recipe;  // blur kernel family and noise kind of the grid
  std::string noise_estimator;
  std::string blur_estimator;
  double mtf_frequency = kDefaultScalarFrequency;
  std::uint64_t seed = 0;
  std::vector<double> blur_extents;  // applied blur sizes behind the MTF axis
};

// Performance map over estimated noise (rows) and blur scalar (columns).
class Iopc {
 public:
  Iopc() = default;
  Iopc(std::vector<double> sigma_grid, std::vector<double> mtf_grid, IopcMetadata meta = {});

  const std::vector<double>& sigma_grid() const { return sigma_grid_; }
  const std::vector<double>& mtf_grid() const { return mtf_grid_; }
  const IopcMetadata& metadata() const { return meta_; }
  IopcMetadata& metadata() { return meta_; }

  const IopcCell& cell(std::size_t i_sigma, std::size_t j_mtf) const;
  void set_cell(std::size_t i_sigma, std::size_t j_mtf, double ap, int count);

  // Adds a (sigma, mtf, AP) tuple to the nearest cell, averaging by count.
  void insert(double sigma, double mtf, double ap, int count = 1);

  std::size_t populated() const;
  bool operator==(const Iopc&) const;

 private:
  std::vector<double> sigma_grid_;
  std::vector<double> mtf_grid_;
  std::vector<IopcCell> cells_;
  IopcMetadata meta_;
};

// Bilinear interpolation over the surrounding cells. Throws RangeError
// outside the grid hull or when a cell with non-zero weight is empty.
double lookup_ap(const Iopc& iopc, double sigma, double mtf);

bool in_hull(const Iopc& iopc, double sigma, double mtf);

std::string iopc_to_json(const Iopc& iopc);
Iopc iopc_from_json(const std::string& text);
// Matrix with sigma rows and MTF columns; empty cells are blank.
std::string iopc_to_csv(const Iopc& iopc);

// ---- construction ---------------------------------------------------------

struct LabeledImage {
  std::string id;
  GrayImage image;
  std::vector<DetBox> gts;
};

struct IopcGridSpec {
  std::vector<double> sigmas = {0, 5, 10, 15, 20, 25};
  std::vector<double> extents = {0, 3, 7, 11, 15, 21};
  KernelType blur = KernelType::kLinearMotion;  // kLinearMotion or kDefocus
  double angle_deg = 0.0;
};

// Blur kernel of the grid family at extent d (identity for d = 0).
Kernel grid_kernel(const IopcGridSpec& spec, double extent);

// Corruption applied at one grid point: blur first, then sensor noise.
CorruptionRecipe grid_recipe(const IopcGridSpec& spec, double sigma, double extent,
                             std::uint64_t seed);

struct IopcSample {
  double applied_sigma = 0.0;
  double applied_extent = 0.0;
  double sigma_median = 0.0;
  double mtf_median = 0.0;
  double ap = 0.0;
};

struct IopcBuild {
  Iopc iopc;
  std::vector<IopcSample> samples;  // grid order: sigma major, extent minor
};

// Estimates on the noise (128) and blur (192, batches of 4) tiles that
// overlap a ground-truth box.
struct PatchEstimates {
  std::vector<double> sigmas;
  std::vector<double> mtfs;  // blur scalar per batch
};
PatchEstimates estimate_patches(const GrayImage& img, const std::vector<DetBox>& gts,
                                const NoiseEstimator& noise, const BlurEstimator& blur,
                                const EstimationContext& ctx);

struct PatchMedians {
  double sigma = 0.0;
  double mtf = 1.0;
};
PatchMedians estimate_medians(const GrayImage& img, const std::vector<DetBox>& gts,
                              const NoiseEstimator& noise, const BlurEstimator& blur,
                              const EstimationContext& ctx);

// Grid points run in parallel; tuples are inserted in grid order. The MTF
// axis holds the grid kernels' blur scalars, the sigma axis the grid
// sigmas. Throws DataError when no image has ground-truth boxes.
IopcBuild build_iopc(const std::vector<LabeledImage>& images, const IopcGridSpec& spec,
                     const NoiseEstimator& noise, const BlurEstimator& blur,
                     const Detector& detector, std::uint64_t seed,
                     const std::string& object_class);

}  // namespace camhealth
