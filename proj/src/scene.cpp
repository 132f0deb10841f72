#include "camhealth/scene.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "camhealth/error.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

GrayImage spectral_texture(int width, int height, double alpha, double mean, double stddev,
                           std::uint64_t seed) {
  if (width < 2 || height < 2) throw InvalidArgument("texture needs at least 2x2 pixels");
  const int half = width / 2 + 1;
  auto* spec = static_cast<fftw_complex*>(
      fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(height) * half));
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int v = 0; v < height; ++v) {
    const double fy = static_cast<double>(v <= height / 2 ? v : v - height) / height;
    for (int u = 0; u < half; ++u) {
      const double fx = static_cast<double>(u) / width;
      const double f = std::hypot(fx, fy);
      const double amp = f > 0.0 ? std::pow(f, -alpha) : 0.0;
      const double ph = phase(rng);
      fftw_complex& c = spec[static_cast<std::size_t>(v) * half + u];
      c[0] = amp * std::cos(ph);
      c[1] = amp * std::sin(ph);
    }
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_2d(height, width, spec, out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);

  double m = 0.0;
  for (double x : out) m += x;
  m /= static_cast<double>(out.size());
  double var = 0.0;
  for (double x : out) var += (x - m) * (x - m);
  const double sd = std::sqrt(var / static_cast<double>(out.size()));
  for (double& x : out) x = mean + (x - m) * (sd > 0.0 ? stddev / sd : 0.0);
  return GrayImage(width, height, std::move(out));
}

GrayImage flat_image(int width, int height, double value) { return GrayImage(width, height, value); }

GrayImage gradient_image(int width, int height, double lo, double hi) {
  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img(x, y) = width > 1 ? lo + (hi - lo) * x / (width - 1) : lo;
    }
  }
  return img;
}

Scene make_scene(const std::string& id, int width, int height, std::uint64_t seed,
                 const std::string& object_class) {
  if (width < 128 || height < 128) throw InvalidArgument("scenes need at least 128x128 pixels");
  Scene scene;
  scene.id = id;
  scene.image = spectral_texture(width, height, 1.6, 110.0, 22.0, split_seed(seed, 0));
  std::mt19937_64 rng(split_seed(seed, 1));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int want = 3 + static_cast<int>(u(rng) * 3.0);
  for (int attempt = 0; attempt < 200 && static_cast<int>(scene.objects.size()) < want; ++attempt) {
    DetBox b;
    b.label = object_class;
    b.w = std::floor(40.0 + 80.0 * u(rng));
    b.h = std::floor(40.0 + 60.0 * u(rng));
    b.x = std::floor(u(rng) * (width - b.w));
    b.y = std::floor(u(rng) * (height - b.h));
    bool clash = false;
    for (const DetBox& o : scene.objects) {
      if (b.x < o.x + o.w + 4 && o.x < b.x + b.w + 4 && b.y < o.y + o.h + 4 && o.y < b.y + b.h + 4) {
        clash = true;
        break;
      }
    }
    if (clash) continue;
    const int ow = static_cast<int>(b.w);
    const int oh = static_cast<int>(b.h);
    const GrayImage tex = spectral_texture(ow, oh, 1.5, 60.0 + 120.0 * u(rng), 25.0,
                                           split_seed(seed, 2 + scene.objects.size()));
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) scene.image(static_cast<int>(b.x) + x, static_cast<int>(b.y) + y) = tex(x, y);
    }
    scene.objects.push_back(b);
  }
  return scene;
}

}  // namespace camhealth
