#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "camhealth/error.hpp"
#include "camhealth/estimators.hpp"

namespace camhealth {

MtfEstimate estimate_mtf_oracle(const GroundTruthBundle& truth) {
  if (truth.blurs.empty()) throw InvalidArgument("oracle MTF needs at least one applied kernel");
  MtfEstimate est;
  est.mtf = truth.combined_mtf();
  est.method = "mtf-oracle";
  return est;
}

MtfEstimate OracleMtfEstimator::estimate(std::span<const Patch> batch,
                                         const EstimationContext& ctx) const {
  if (ctx.truth == nullptr) throw InvalidArgument("mtf-oracle needs the ground-truth bundle");
  MtfEstimate est = estimate_mtf_oracle(*ctx.truth);
  if (!batch.empty()) {
    est.x = batch.front().x();
    est.y = batch.front().y();
  }
  est.batch_size = static_cast<int>(batch.size());
  return est;
}

namespace {

constexpr double kBandHalfWidth = 0.02;
constexpr double kWedgeHalfAngleDeg = 15.0;
constexpr std::size_t kMaxBatch = 4;
constexpr double kFitLo = 0.02;
constexpr double kFitHi = 0.4;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Power spectrum of the mean-removed, Hann-windowed patch on the half plane
// fx >= 0: entry (v, u) holds frequency (u/n, v'/n) with v' = v or v - n.
class PowerSpectrum {
 public:
  explicit PowerSpectrum(const Patch& patch) : n_(patch.size()), half_(n_ / 2 + 1) {
    std::vector<double> in(static_cast<std::size_t>(n_) * n_);
    double mean = 0.0;
    for (int y = 0; y < n_; ++y) {
      for (double v : patch.row(y)) mean += v;
    }
    mean /= static_cast<double>(in.size());
    std::vector<double> hann(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      hann[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n_);
    }
    double energy = 0.0;
    for (int y = 0; y < n_; ++y) {
      auto row = patch.row(y);
      for (int x = 0; x < n_; ++x) {
        const double d = row[static_cast<std::size_t>(x)] - mean;
        energy += d * d;
        in[static_cast<std::size_t>(y) * n_ + x] =
            d * hann[static_cast<std::size_t>(x)] * hann[static_cast<std::size_t>(y)];
      }
    }
    if (energy / static_cast<double>(in.size()) < 1e-6) {
      throw DataError("insufficient texture for spectral MTF estimation");
    }
    auto* out = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n_) * half_));
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      plan = fftw_plan_dft_r2c_2d(n_, n_, in.data(), out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    power_.resize(static_cast<std::size_t>(n_) * half_);
    for (std::size_t i = 0; i < power_.size(); ++i) power_[i] = out[i][0] * out[i][0] + out[i][1] * out[i][1];
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(out);
  }

  // Calls fn(fx, fy, power) for every half-plane bin except DC.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int v = 0; v < n_; ++v) {
      const double fy = static_cast<double>(v < (n_ + 1) / 2 ? v : v - n_) / n_;
      for (int u = 0; u < half_; ++u) {
        if (u == 0 && v == 0) continue;
        fn(static_cast<double>(u) / n_, fy, power_[static_cast<std::size_t>(v) * half_ + u]);
      }
    }
  }

 private:
  int n_;
  int half_;
  std::vector<double> power_;
};

struct BandSum {
  double power = 0.0;
  double model = 0.0;
};

struct BandPowers {
  BandSum low;
  std::array<BandSum, kMtfSampleCount> h{};
  std::array<BandSum, kMtfSampleCount> v{};
};

// Sample frequencies above Nyquist are read at their alias 1 - f, where a
// real kernel's transfer magnitude repeats.
double folded(double f) { return f > 0.5 ? 1.0 - f : f; }

BandPowers band_powers(const PowerSpectrum& ps, const ReferenceSpectrum& ref) {
  const double tan_wedge = std::tan(kWedgeHalfAngleDeg * std::numbers::pi / 180.0);
  BandPowers b;
  ps.for_each([&](double fx, double fy, double pw) {
    const double f = std::hypot(fx, fy);
    const double model = std::pow(f, -2.0 * ref.alpha);
    if (f >= ref.low_band_lo && f <= ref.low_band_hi) {
      b.low.power += pw;
      b.low.model += model;
    }
    const bool horizontal = std::abs(fy) <= tan_wedge * fx;
    const bool vertical = fx <= tan_wedge * std::abs(fy);
    if (!horizontal && !vertical) return;
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      if (std::abs(f - folded(kMtfFrequencies[i])) > kBandHalfWidth) continue;
      BandSum& t = horizontal ? b.h[i] : b.v[i];
      t.power += pw;
      t.model += model;
    }
  });
  if (b.low.power <= 0.0) throw DataError("insufficient texture for spectral MTF estimation");
  return b;
}

// Band power relative to the power law with the patch's own amplitude.
double relative_power(const BandSum& band, const BandSum& low) {
  if (band.model <= 0.0) return 0.0;
  return (band.power / band.model) / (low.power / low.model);
}

double log_log_alpha(const PowerSpectrum& ps, int n) {
  // Radial averages over unit-width rings, then a line fit.
  const int rings = n / 2;
  std::vector<double> sum(static_cast<std::size_t>(rings) + 1, 0.0);
  std::vector<int> count(sum.size(), 0);
  ps.for_each([&](double fx, double fy, double pw) {
    const int r = static_cast<int>(std::lround(std::hypot(fx, fy) * n));
    if (r <= rings) {
      sum[static_cast<std::size_t>(r)] += pw;
      ++count[static_cast<std::size_t>(r)];
    }
  });
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int r = 1; r <= rings; ++r) {
    const double f = static_cast<double>(r) / n;
    if (f < kFitLo || f > kFitHi || count[static_cast<std::size_t>(r)] == 0) continue;
    const double mean = sum[static_cast<std::size_t>(r)] / count[static_cast<std::size_t>(r)];
    if (mean <= 0.0) continue;
    const double lx = std::log(f);
    const double ly = std::log(mean);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw DataError("too few spectral rings for a reference fit");
  return -0.5 * (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void require_blur_patches(std::span<const Patch> patches) {
  for (const Patch& p : patches) {
    if (p.size() != kBlurPatchSize) throw InvalidArgument("blur estimation needs 192x192 patches");
  }
}

}  // namespace

ReferenceSpectrum fit_reference_spectrum(std::span<const Patch> sharp_patches) {
  if (sharp_patches.empty()) throw InvalidArgument("reference fit needs at least one patch");
  require_blur_patches(sharp_patches);
  ReferenceSpectrum ref;
  std::vector<PowerSpectrum> spectra;
  for (const Patch& p : sharp_patches) spectra.emplace_back(p);

  double alpha = 0.0;
  for (const PowerSpectrum& ps : spectra) alpha += log_log_alpha(ps, kBlurPatchSize);
  ref.alpha = alpha / static_cast<double>(spectra.size());

  ref.gain_h.fill(0.0);
  ref.gain_v.fill(0.0);
  for (const PowerSpectrum& ps : spectra) {
    const BandPowers b = band_powers(ps, ref);
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      ref.gain_h[i] += relative_power(b.h[i], b.low) / static_cast<double>(spectra.size());
      ref.gain_v[i] += relative_power(b.v[i], b.low) / static_cast<double>(spectra.size());
    }
  }
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    if (!(ref.gain_h[i] > 0.0) || !(ref.gain_v[i] > 0.0)) {
      throw DataError("reference patches carry no power at a sample frequency");
    }
  }
  return ref;
}

MtfEstimate estimate_mtf_spectral(std::span<const Patch> batch, const ReferenceSpectrum& ref) {
  if (batch.empty()) throw InvalidArgument("spectral MTF needs at least one patch");
  if (batch.size() > kMaxBatch) throw InvalidArgument("spectral MTF takes at most 4 patches");
  require_blur_patches(batch);

  MtfEstimate est;
  est.method = "mtf-spectral";
  est.x = batch.front().x();
  est.y = batch.front().y();
  est.batch_size = static_cast<int>(batch.size());

  auto ratio = [&](const BandSum& band, const BandSum& low, double gain) {
    const double r = std::sqrt(relative_power(band, low) / gain);
    if (r > 1.0) {
      ++est.clamp_count;
      return 1.0;
    }
    return r;
  };
  for (const Patch& p : batch) {
    const BandPowers b = band_powers(PowerSpectrum(p), ref);
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      est.mtf.h[i] += ratio(b.h[i], b.low, ref.gain_h[i]);
      est.mtf.v[i] += ratio(b.v[i], b.low, ref.gain_v[i]);
    }
  }
  for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
    est.mtf.h[i] /= static_cast<double>(batch.size());
    est.mtf.v[i] /= static_cast<double>(batch.size());
  }
  return est;
}

MtfEstimate SpectralMtfEstimator::estimate(std::span<const Patch> batch,
                                           const EstimationContext&) const {
  return estimate_mtf_spectral(batch, ref_);
}

}  // namespace camhealth
