#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "camhealth/image.hpp"

namespace camhealth {

enum class NoiseSource { kPhoton, kDcsn, kReadout };

std::string to_string(NoiseSource s);
NoiseSource noise_source_from_string(const std::string& name);

// Sensor constants. DN stand in for electrons at unit gain; the values are
// placeholders that satisfy the modelled proportionalities, not a claim
// about any particular sensor.
struct SensorConstants {
  double dark_variance_ref = 10.0;        // DN^2 per second at reference_temp_k
  double activation_energy_ev = 0.63;     // Arrhenius activation energy
  double reference_temp_k = 300.0;
  double reset_sigma_ref = 2.0;           // kTC noise at reference_temp_k, DN
  double source_follower_sigma_ref = 1.5; // DN at reference_temp_k
};

// Target noise levels used throughout the evaluation protocol (DN).
inline constexpr double kSigmaGrid[] = {5.0, 10.0, 15.0, 20.0, 25.0};

struct NoiseConfig {
  std::vector<NoiseSource> sources;
  double temperature_k = 330.0;
  double exposure_s = 0.1;
  // nullopt applies the raw physical noise; otherwise the summed field is
  // amplified to this standard deviation. Allowed: 0 or [1, 30] DN.
  std::optional<double> target_sigma;
  std::uint64_t seed = 0;

  // Single source at T = 330 K, t_exp = 0.1 s.
  static NoiseConfig isolated(NoiseSource source, double sigma, std::uint64_t seed);
  // Sensor noise only (DCSN + readout) at the isolated preset.
  static NoiseConfig sensor(double sigma, std::uint64_t seed);
  // All sources, T ~ U[300, 330] K and t_exp ~ U[0.002, 1] s drawn from seed.
  static NoiseConfig combined(double sigma, std::uint64_t seed);

  bool has(NoiseSource s) const;
  void validate() const;
};

enum class NoisePosition { kNoBlur, kPreBlur, kPostBlur, kBetweenBlur };

std::string to_string(NoisePosition p);
NoisePosition noise_position_from_string(const std::string& name);

struct NoiseGroundTruth {
  double sigma = 0.0;  // realized standard deviation of the applied field
  std::vector<NoiseSource> sources;
  NoisePosition position = NoisePosition::kNoBlur;
  double temperature_k = 0.0;
  double exposure_s = 0.0;
};

// Population standard deviation of all pixels.
double field_sigma(const GrayImage& field);

// Poisson(lambda = pixel) minus the pixel value; Gaussian N(0, lambda)
// above lambda = 1000. Requires non-negative intensities.
GrayImage photon_deviation(const GrayImage& img, std::uint64_t seed);
GrayImage photon_deviation_serial(const GrayImage& img, std::uint64_t seed);

// img + photon deviation, with the realized sigma.
std::pair<GrayImage, NoiseGroundTruth> photon_shot(const GrayImage& img, std::uint64_t seed);

// Zero-mean unit-variance white Gaussian field; rows draw from independent
// sub-streams so the parallel and serial versions agree bit for bit.
GrayImage gaussian_field(int width, int height, std::uint64_t seed);
GrayImage gaussian_field_serial(int width, int height, std::uint64_t seed);

// Dark-current shot noise variance: linear in exposure time, Arrhenius in
// temperature.
double dcsn_variance(double temperature_k, double exposure_s, const SensorConstants& c = {});
GrayImage dcsn(int width, int height, const NoiseConfig& config, std::uint64_t seed,
               const SensorConstants& c = {});

struct ReadoutFields {
  GrayImage reset;
  GrayImage source_follower;
};
double reset_sigma(double temperature_k, const SensorConstants& c = {});
double source_follower_sigma(double temperature_k, const SensorConstants& c = {});
ReadoutFields readout_components(int width, int height, const NoiseConfig& config,
                                 std::uint64_t seed, const SensorConstants& c = {});
GrayImage readout(int width, int height, const NoiseConfig& config, std::uint64_t seed,
                  const SensorConstants& c = {});

struct ScaledField {
  GrayImage field;
  double scale = 0.0;
  double sigma = 0.0;
};

// Multiplies the field by one scalar so its standard deviation equals
// target_sigma. Throws when asked to amplify an all-zero field.
ScaledField scale_to_sigma(const GrayImage& field, double target_sigma);

// Raw (unscaled) noise field of all sources in `config`, generated for the
// given signal. Sub-streams: photon 0, DCSN 1, readout 2.
GrayImage raw_noise_field(const GrayImage& signal, const NoiseConfig& config,
                          const SensorConstants& c = {});

}  // namespace camhealth
