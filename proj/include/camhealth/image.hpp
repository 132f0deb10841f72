#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace camhealth {

// Patch sizes used by the blur and noise estimators.
inline constexpr int kBlurPatchSize = 192;
inline constexpr int kNoisePatchSize = 128;

// Row-major grayscale image in digital numbers (DN, nominal range 0..255).
// Values are kept as doubles; quantization happens only on export.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& operator()(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<double> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const double> pixels() const { return data_; }
  std::span<double> pixels() { return data_; }

  double mean() const;

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Square read-only window into a parent image. The parent must outlive it.
class Patch {
 public:
  Patch(const GrayImage& parent, int x, int y, int size);

  int x() const { return x_; }
  int y() const { return y_; }
  int size() const { return size_; }
  const GrayImage& parent() const { return *parent_; }

  double operator()(int dx, int dy) const { return (*parent_)(x_ + dx, y_ + dy); }
  std::span<const double> row(int dy) const {
    return parent_->row(y_ + dy).subspan(static_cast<std::size_t>(x_),
                                          static_cast<std::size_t>(size_));
  }

  GrayImage copy() const;

 private:
  const GrayImage* parent_;
  int x_;
  int y_;
  int size_;
};

// All full size x size tiles at multiples of `stride`, in raster order.
// Border remainders are dropped, never padded.
std::vector<Patch> tile_patches(const GrayImage& img, int size, int stride);

// Round half-to-even, then clamp to [0, 255].
GrayImage clamp_quantize(const GrayImage& img);

}  // namespace camhealth
