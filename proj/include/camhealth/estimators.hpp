#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "camhealth/image.hpp"
#include "camhealth/mtf.hpp"
#include "camhealth/pipeline.hpp"

namespace camhealth {

struct NoiseEstimate {
  double sigma_hat = 0.0;
  std::string method;
  int x = 0;
  int y = 0;
};

struct MtfEstimate {
  MtfSamples mtf;
  std::string method;
  int x = 0;
  int y = 0;
  int batch_size = 0;
  int clamp_count = 0;  // samples clamped into [0, 1]
};

// Side information an estimator may use. Blind estimators ignore it.
struct EstimationContext {
  const GroundTruthBundle* truth = nullptr;
};

// Estimators are immutable and may be called concurrently.
class NoiseEstimator {
 public:
  virtual ~NoiseEstimator() = default;
  virtual std::string id() const = 0;
  virtual NoiseEstimate estimate(const Patch& patch) const = 0;
};

class BlurEstimator {
 public:
  virtual ~BlurEstimator() = default;
  virtual std::string id() const = 0;
  virtual MtfEstimate estimate(std::span<const Patch> batch, const EstimationContext& ctx) const = 0;
};

// ---- noise ----------------------------------------------------------------

// Block-based adaptive Gaussian filtering on a 128x128 patch:
//  1. split into 8x16 blocks and rank them by standard deviation,
//  2. keep the most homogeneous 10%,
//  3. derive a Gaussian smoothing width from their mean deviation,
//  4. return the std of (block - smoothed block) over the kept blocks,
//     corrected for the part of white noise the filter retains.
NoiseEstimate estimate_noise_bf(const Patch& patch);

// PCA of overlapping 8x8 sub-blocks (stride 4). Walking down from the full
// eigenvalue set, the first low-variance tail whose mean equals its median
// (as for pure noise) is taken; sigma = sqrt(mean of that tail).
NoiseEstimate estimate_noise_pca(const Patch& patch);

// Ascending covariance eigenvalues used by estimate_noise_pca.
std::vector<double> pca_block_eigenvalues(const Patch& patch);

class BlockFilterNoiseEstimator final : public NoiseEstimator {
 public:
  std::string id() const override { return "bf"; }
  NoiseEstimate estimate(const Patch& patch) const override { return estimate_noise_bf(patch); }
};

class PcaNoiseEstimator final : public NoiseEstimator {
 public:
  std::string id() const override { return "pca"; }
  NoiseEstimate estimate(const Patch& patch) const override { return estimate_noise_pca(patch); }
};

// Runs `est` on every 128x128 tile (stride 128) of `img`; patches are
// distributed over OpenMP threads, results come back in raster order.
std::vector<NoiseEstimate> estimate_noise_tiles(const GrayImage& img, const NoiseEstimator& est);
std::vector<NoiseEstimate> estimate_noise_tiles_serial(const GrayImage& img,
                                                       const NoiseEstimator& est);

// ---- blur -----------------------------------------------------------------

// Product of every applied kernel's MTF. Throws when no blur was applied
// and the bundle is empty of kernels.
MtfEstimate estimate_mtf_oracle(const GroundTruthBundle& truth);

class OracleMtfEstimator final : public BlurEstimator {
 public:
  std::string id() const override { return "mtf-oracle"; }
  MtfEstimate estimate(std::span<const Patch> batch, const EstimationContext& ctx) const override;
};

// Natural-image amplitude spectrum model |F(f)| ~ c / f^alpha. The
// amplitude c is refit on every patch from the lowest frequencies. The
// gains hold, per sample, the mean band power of the sharp calibration
// patches relative to that model, so windowing and corpus anisotropy are
// divided out.
struct ReferenceSpectrum {
  double alpha = 1.2;
  double low_band_lo = 0.012;
  double low_band_hi = 0.03;
  MtfCurve gain_h = {1, 1, 1, 1, 1, 1, 1, 1};
  MtfCurve gain_v = {1, 1, 1, 1, 1, 1, 1, 1};
};

// Log-log least-squares fit of alpha over radially averaged spectra of
// sharp 192x192 patches, then the per-sample gains.
ReferenceSpectrum fit_reference_spectrum(std::span<const Patch> sharp_patches);

// Power in +-15 degree wedges around the horizontal and vertical frequency
// axes (radial bands +-0.02 around each sample), relative to the
// reference, as an amplitude ratio clamped to [0, 1] and averaged over the
// batch (at most 4 patches of 192x192). Samples above 0.5 lines/px are read
// at their alias 1 - f. Throws DataError for textureless patches.
MtfEstimate estimate_mtf_spectral(std::span<const Patch> batch, const ReferenceSpectrum& ref);

class SpectralMtfEstimator final : public BlurEstimator {
 public:
  explicit SpectralMtfEstimator(ReferenceSpectrum ref = {}) : ref_(ref) {}
  std::string id() const override { return "mtf-spectral"; }
  MtfEstimate estimate(std::span<const Patch> batch, const EstimationContext& ctx) const override;
  const ReferenceSpectrum& reference() const { return ref_; }

 private:
  ReferenceSpectrum ref_;
};

// ---- registry -------------------------------------------------------------

// String-keyed estimator lookup. Built-ins: bf, pca, mtf-oracle,
// mtf-spectral. Registration is thread-safe.
class EstimatorRegistry {
 public:

  static EstimatorRegistry& global();

  void register_noise(const std::string& id, std::shared_ptr<const NoiseEstimator> est);
  void register_blur(const std::string& id, std::shared_ptr<const BlurEstimator> est);

  std::shared_ptr<const NoiseEstimator> noise(const std::string& id) const;
  std::shared_ptr<const BlurEstimator> blur(const std::string& id) const;
  bool has_noise(const std::string& id) const;
  bool has_blur(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  EstimatorRegistry();
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace camhealth
