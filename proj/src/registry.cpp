#include <map>
#include <mutex>

#include "camhealth/error.hpp"
#include "camhealth/estimators.hpp"

namespace camhealth {

struct EstimatorRegistry::Impl {
  mutable std::mutex mutex;
  std::map<std::string, std::shared_ptr<const NoiseEstimator>> noise;
  std::map<std::string, std::shared_ptr<const BlurEstimator>> blur;
};

EstimatorRegistry::EstimatorRegistry() : impl_(std::make_shared<Impl>()) {
  impl_->noise["bf"] = std::make_shared<BlockFilterNoiseEstimator>();
  impl_->noise["pca"] = std::make_shared<PcaNoiseEstimator>();
  impl_->blur["mtf-oracle"] = std::make_shared<OracleMtfEstimator>();
  impl_->blur["mtf-spectral"] = std::make_shared<SpectralMtfEstimator>();
}

EstimatorRegistry& EstimatorRegistry::global() {
  static EstimatorRegistry registry;
  return registry;
}

void EstimatorRegistry::register_noise(const std::string& id,
                                       std::shared_ptr<const NoiseEstimator> est) {
  if (!est) throw InvalidArgument("null estimator");
  std::lock_guard<std::mutex> lock(impl_->mutex);
  if (impl_->noise.count(id) || impl_->blur.count(id)) throw InvalidArgument("estimator id taken: " + id);
  impl_->noise[id] = std::move(est);
}

void EstimatorRegistry::register_blur(const std::string& id,
                                      std::shared_ptr<const BlurEstimator> est) {
  if (!est) throw InvalidArgument("null estimator");
  std::lock_guard<std::mutex> lock(impl_->mutex);
  if (impl_->noise.count(id) || impl_->blur.count(id)) throw InvalidArgument("estimator id taken: " + id);
  impl_->blur[id] = std::move(est);
}

std::shared_ptr<const NoiseEstimator> EstimatorRegistry::noise(const std::string& id) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  auto it = impl_->noise.find(id);
  if (it == impl_->noise.end()) throw InvalidArgument("unknown noise estimator: " + id);
  return it->second;
}

std::shared_ptr<const BlurEstimator> EstimatorRegistry::blur(const std::string& id) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  auto it = impl_->blur.find(id);
  if (it == impl_->blur.end()) throw InvalidArgument("unknown blur estimator: " + id);
  return it->second;
}

bool EstimatorRegistry::has_noise(const std::string& id) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return impl_->noise.count(id) > 0;
}

bool EstimatorRegistry::has_blur(const std::string& id) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return impl_->blur.count(id) > 0;
}

std::vector<std::string> EstimatorRegistry::ids() const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  std::vector<std::string> out;
  for (const auto& [id, _] : impl_->noise) out.push_back(id);
  for (const auto& [id, _] : impl_->blur) out.push_back(id);
  return out;
}

}  // namespace camhealth
