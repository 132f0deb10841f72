// Serial reference vs OpenMP version of each parallel kernel.

#include <benchmark/benchmark.h>

#include "camhealth/convolve.hpp"
#include "camhealth/estimators.hpp"
#include "camhealth/kernel.hpp"
#include "camhealth/noise.hpp"
#include "camhealth/scene.hpp"

using namespace camhealth;

namespace {

const GrayImage& frame() {
  static const GrayImage img = spectral_texture(768, 768, 1.4, 110, 20, 1);
  return img;
}

void BM_ConvolveSerial(benchmark::State& state) {
  const Kernel k = linear_motion_kernel(static_cast<double>(state.range(0)), 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_serial(frame(), k));
}
void BM_ConvolveParallel(benchmark::State& state) {
  const Kernel k = linear_motion_kernel(static_cast<double>(state.range(0)), 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(frame(), k));
}
BENCHMARK(BM_ConvolveSerial)->Arg(7)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveParallel)->Arg(7)->Arg(21)->Unit(benchmark::kMillisecond);

void BM_GaussianFieldSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_field_serial(768, 768, 2));
}
void BM_GaussianFieldParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_field(768, 768, 2));
}
BENCHMARK(BM_GaussianFieldSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianFieldParallel)->Unit(benchmark::kMillisecond);

void BM_PhotonSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(photon_deviation_serial(frame(), 3));
}
void BM_PhotonParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(photon_deviation(frame(), 3));
}
BENCHMARK(BM_PhotonSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhotonParallel)->Unit(benchmark::kMillisecond);

void BM_NoiseTilesSerial(benchmark::State& state) {
  const PcaNoiseEstimator pca;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_noise_tiles_serial(frame(), pca));
}
void BM_NoiseTilesParallel(benchmark::State& state) {
  const PcaNoiseEstimator pca;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_noise_tiles(frame(), pca));
}
BENCHMARK(BM_NoiseTilesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoiseTilesParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
