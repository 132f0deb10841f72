#include "camhealth/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "camhealth/error.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {
namespace {

constexpr double kBoltzmannEv = 8.617333262e-5;
constexpr double kGaussianLambda = 1000.0;

double poisson_deviation(double lambda, std::mt19937_64& rng) {
  if (lambda == 0.0) return 0.0;
  if (lambda > kGaussianLambda) {
    std::normal_distribution<double> n(0.0, std::sqrt(lambda));
    return n(rng);
  }
  std::poisson_distribution<long> p(lambda);
  return static_cast<double>(p(rng)) - lambda;
}

void photon_row(const GrayImage& img, GrayImage& out, int y, std::uint64_t seed) {
  std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(y)));
  auto src = img.row(y);
  auto dst = out.row(y);
  for (std::size_t x = 0; x < src.size(); ++x) dst[x] = poisson_deviation(src[x], rng);
}

void gaussian_row(GrayImage& out, int y, std::uint64_t seed) {
  std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(y)));
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& v : out.row(y)) v = n(rng);
}

void require_non_negative(const GrayImage& img) {
  for (double v : img.pixels()) {
    if (v < 0.0 || std::isnan(v)) throw InvalidArgument("photon noise: negative input intensity");
  }
}

}  // namespace

std::string to_string(NoiseSource s) {
  switch (s) {
    case NoiseSource::kPhoton: return "photon";
    case NoiseSource::kDcsn: return "dcsn";
    case NoiseSource::kReadout: return "readout";
  }
  return "unknown";
}

NoiseSource noise_source_from_string(const std::string& name) {
  if (name == "photon") return NoiseSource::kPhoton;
  if (name == "dcsn") return NoiseSource::kDcsn;
  if (name == "readout") return NoiseSource::kReadout;
  throw InvalidArgument("unknown noise source '" + name + "'");
}

std::string to_string(NoisePosition p) {
  switch (p) {
    case NoisePosition::kNoBlur: return "no-blur";
    case NoisePosition::kPreBlur: return "pre-blur";
    case NoisePosition::kPostBlur: return "post-blur";
    case NoisePosition::kBetweenBlur: return "between-blur";
  }
  return "unknown";
}

NoisePosition noise_position_from_string(const std::string& name) {
  for (NoisePosition p : {NoisePosition::kNoBlur, NoisePosition::kPreBlur,
                          NoisePosition::kPostBlur, NoisePosition::kBetweenBlur}) {
    if (to_string(p) == name) return p;
  }
  throw InvalidArgument("unknown noise position '" + name + "'");
}

NoiseConfig NoiseConfig::isolated(NoiseSource source, double sigma, std::uint64_t seed) {
  NoiseConfig c;
  c.sources = {source};
  c.target_sigma = sigma;
  c.seed = seed;
  return c;
}

NoiseConfig NoiseConfig::sensor(double sigma, std::uint64_t seed) {
  NoiseConfig c;
  c.sources = {NoiseSource::kDcsn, NoiseSource::kReadout};
  c.target_sigma = sigma;
  c.seed = seed;
  return c;
}

NoiseConfig NoiseConfig::combined(double sigma, std::uint64_t seed) {
  NoiseConfig c;
  c.sources = {NoiseSource::kPhoton, NoiseSource::kDcsn, NoiseSource::kReadout};
  c.target_sigma = sigma;
  c.seed = seed;
  std::mt19937_64 rng(split_seed(seed, 0xC0FFEEULL));
  std::uniform_real_distribution<double> temp(300.0, 330.0);
  std::uniform_real_distribution<double> texp(0.002, 1.0);
  c.temperature_k = temp(rng);
  c.exposure_s = texp(rng);
  return c;
}

bool NoiseConfig::has(NoiseSource s) const {
  return std::find(sources.begin(), sources.end(), s) != sources.end();
}

void NoiseConfig::validate() const {
  if (sources.empty()) throw InvalidArgument("NoiseConfig: no noise sources");
  if (temperature_k <= 0.0) throw InvalidArgument("NoiseConfig: temperature must be positive");
  if (exposure_s < 0.0) throw InvalidArgument("NoiseConfig: negative exposure time");
  if (target_sigma) {
    const double s = *target_sigma;
    if (!(s == 0.0 || (s >= 1.0 && s <= 30.0))) {
      throw InvalidArgument("NoiseConfig: target sigma must be 0 or within [1, 30] DN");
    }
  }
}

double field_sigma(const GrayImage& field) {
  const double m = field.mean();
  double ss = 0.0;
  for (double v : field.pixels()) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(field.size()));
}

GrayImage photon_deviation(const GrayImage& img, std::uint64_t seed) {
  require_non_negative(img);
  GrayImage out(img.width(), img.height());
  const int h = img.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) photon_row(img, out, y, seed);
  return out;
}

GrayImage photon_deviation_serial(const GrayImage& img, std::uint64_t seed) {
  require_non_negative(img);
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) photon_row(img, out, y, seed);
  return out;
}

std::pair<GrayImage, NoiseGroundTruth> photon_shot(const GrayImage& img, std::uint64_t seed) {
  GrayImage dev = photon_deviation(img, seed);
  NoiseGroundTruth gt;
  gt.sigma = field_sigma(dev);
  gt.sources = {NoiseSource::kPhoton};
  GrayImage out = img;
  auto o = out.pixels();
  auto d = dev.pixels();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += d[i];
  return {std::move(out), gt};
}

GrayImage gaussian_field(int width, int height, std::uint64_t seed) {
  GrayImage out(width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) gaussian_row(out, y, seed);
  return out;
}

GrayImage gaussian_field_serial(int width, int height, std::uint64_t seed) {
  GrayImage out(width, height);
  for (int y = 0; y < height; ++y) gaussian_row(out, y, seed);
  return out;
}

double dcsn_variance(double temperature_k, double exposure_s, const SensorConstants& c) {
  const double arrhenius = std::exp(-c.activation_energy_ev / kBoltzmannEv *
                                    (1.0 / temperature_k - 1.0 / c.reference_temp_k));
  return c.dark_variance_ref * exposure_s * arrhenius;
}

GrayImage dcsn(int width, int height, const NoiseConfig& config, std::uint64_t seed,
               const SensorConstants& c) {
  const double sigma = std::sqrt(dcsn_variance(config.temperature_k, config.exposure_s, c));
  GrayImage field = gaussian_field(width, height, seed);
  for (double& v : field.pixels()) v *= sigma;
  return field;
}

double reset_sigma(double temperature_k, const SensorConstants& c) {
  return c.reset_sigma_ref * std::sqrt(temperature_k / c.reference_temp_k);
}

double source_follower_sigma(double temperature_k, const SensorConstants& c) {
  return c.source_follower_sigma_ref * std::sqrt(temperature_k / c.reference_temp_k);
}

ReadoutFields readout_components(int width, int height, const NoiseConfig& config,
                                 std::uint64_t seed, const SensorConstants& c) {
  ReadoutFields f{gaussian_field(width, height, split_seed(seed, 0)),
                  gaussian_field(width, height, split_seed(seed, 1))};
  const double sr = reset_sigma(config.temperature_k, c);
  const double ss = source_follower_sigma(config.temperature_k, c);
  for (double& v : f.reset.pixels()) v *= sr;
  for (double& v : f.source_follower.pixels()) v *= ss;
  return f;
}

GrayImage readout(int width, int height, const NoiseConfig& config, std::uint64_t seed,
                  const SensorConstants& c) {
  ReadoutFields f = readout_components(width, height, config, seed, c);
  auto a = f.reset.pixels();
  auto b = f.source_follower.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return std::move(f.reset);
}

ScaledField scale_to_sigma(const GrayImage& field, double target_sigma) {
  if (target_sigma < 0.0) throw InvalidArgument("scale_to_sigma: negative target");
  ScaledField out{GrayImage(field.width(), field.height(), 0.0), 0.0, 0.0};
  if (target_sigma == 0.0) return out;
  const double sigma = field_sigma(field);
  if (sigma == 0.0) throw InvalidArgument("scale_to_sigma: cannot amplify a zero field");
  out.scale = target_sigma / sigma;
  out.field = field;
  for (double& v : out.field.pixels()) v *= out.scale;
  out.sigma = field_sigma(out.field);
  return out;
}

GrayImage raw_noise_field(const GrayImage& signal, const NoiseConfig& config,
                          const SensorConstants& c) {
  config.validate();
  GrayImage total(signal.width(), signal.height(), 0.0);
  auto add = [&](const GrayImage& f) {
    auto t = total.pixels();
    auto s = f.pixels();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += s[i];
  };
  if (config.has(NoiseSource::kPhoton)) add(photon_deviation(signal, split_seed(config.seed, 0)));
  if (config.has(NoiseSource::kDcsn)) {
    add(dcsn(signal.width(), signal.height(), config, split_seed(config.seed, 1), c));
  }
  if (config.has(NoiseSource::kReadout)) {
    add(readout(signal.width(), signal.height(), config, split_seed(config.seed, 2), c));
  }
  return total;
}

}  // namespace camhealth
