#include "camhealth/image.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <numeric>
#include <string>

#include "camhealth/error.hpp"

namespace camhealth {

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("GrayImage: dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("GrayImage: dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("GrayImage: data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
}

double GrayImage::mean() const {
  if (data_.empty()) return 0.0;
  return std::accumulate(data_.begin(), data_.end(), 0.0) /
         static_cast<double>(data_.size());
}

Patch::Patch(const GrayImage& parent, int x, int y, int size)
    : parent_(&parent), x_(x), y_(y), size_(size) {
  if (size < 1 || x < 0 || y < 0 || x + size > parent.width() ||
      y + size > parent.height()) {
    throw InvalidArgument("Patch: window exceeds parent bounds");
  }
}

GrayImage Patch::copy() const {
  GrayImage out(size_, size_);
  for (int dy = 0; dy < size_; ++dy) {
    auto src = row(dy);
    std::copy(src.begin(), src.end(), out.row(dy).begin());
  }
  return out;
}

std::vector<Patch> tile_patches(const GrayImage& img, int size, int stride) {
  if (stride < 1) throw InvalidArgument("tile_patches: stride must be >= 1");
  if (size < 1 || size > std::min(img.width(), img.height())) {
    throw InvalidArgument("tile_patches: patch size " + std::to_string(size) +
                          " larger than image");
  }
  std::vector<Patch> patches;
  for (int y = 0; y + size <= img.height(); y += stride) {
    for (int x = 0; x + size <= img.width(); x += stride) {
      patches.emplace_back(img, x, y, size);
    }
  }
  return patches;
}

GrayImage clamp_quantize(const GrayImage& img) {
  GrayImage out = img;
  // nearbyint honours the current rounding mode, which defaults to
  // round-half-to-even.
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  for (double& v : out.pixels()) {
    v = std::clamp(std::nearbyint(v), 0.0, 255.0);
  }
  std::fesetround(saved);
  return out;
}

}  // namespace camhealth
