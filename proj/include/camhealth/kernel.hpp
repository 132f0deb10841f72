#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace camhealth {

inline constexpr int kDefaultKernelSize = 31;

// Blur sizes of the synthesis protocol, in pixels.
inline constexpr int kBlurSizeGrid[] = {3, 7, 11, 15, 21};

enum class KernelType { kIdentity, kDefocus, kLinearMotion, kNonlinearMotion, kComposite };

std::string to_string(KernelType type);
KernelType kernel_type_from_string(const std::string& name);

struct KernelInfo {
  KernelType type = KernelType::kIdentity;
  double extent_px = 0.0;          // defocus diameter or motion path length
  double orientation_deg = 0.0;    // motion direction (chord angle for curves)
  bool linear = true;
  std::optional<std::uint64_t> seed;
};

// Square, odd-sized, non-negative PSF normalized to unit sum. Offsets are
// measured from the center pixel; `at(dx, dy)` with |dx|,|dy| <= radius().
class Kernel {
 public:
  Kernel(int size, std::vector<double> weights, KernelInfo info = {});

  static Kernel identity(int size = kDefaultKernelSize);

  int size() const { return size_; }
  int radius() const { return size_ / 2; }
  const std::vector<double>& weights() const { return weights_; }
  const KernelInfo& info() const { return info_; }

  double at(int dx, int dy) const {
    return weights_[static_cast<std::size_t>(dy + radius()) * size_ + (dx + radius())];
  }

  double sum() const;

  // Same PSF rotated by +90 degrees (x -> y).
  Kernel rotated90() const;

 private:
  int size_;
  std::vector<double> weights_;
  KernelInfo info_;
};

// Circle-of-confusion diameter A * f/(S1-f) * |S2-S1|/S2 for a thin lens;
// all lengths in the same unit.
double coc_diameter(double aperture, double focal_length, double s1_focused, double s2_actual);

// Uniform disk of diameter d = 2r + 1 pixels (d odd).
Kernel defocus_kernel(int diameter_px, int size = kDefaultKernelSize);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Polyline in kernel coordinates (origin at the center pixel, +y down)
// with one intensity weight per segment.
struct MotionPath {
  std::vector<Point2> waypoints;
  std::vector<double> segment_weights;

  double arc_length() const;
};

MotionPath linear_path(double length_px, double angle_deg);

// Seeded smooth random curve with exact arc length `length_px`.
MotionPath random_smooth_path(double length_px, std::uint64_t seed);

// Rasterizes a path: each pixel receives the weighted length of the path
// inside its unit square, then the kernel is normalized.
Kernel motion_kernel(const MotionPath& path, double length_px, bool linear,
                     int size = kDefaultKernelSize);

Kernel linear_motion_kernel(double length_px, double angle_deg = 0.0,
                            int size = kDefaultKernelSize);

// Draws curves until the rasterized arc length is within +-1 px of the
// target; throws if no candidate fits after a bounded number of draws.
Kernel nonlinear_motion_kernel(double length_px, std::uint64_t seed,
                               int size = kDefaultKernelSize);

// Length of the 8-connected pixel chain visited by the path, counting the
// first pixel as 1 and diagonal steps as sqrt(2).
double rasterized_arc_length(const MotionPath& path);

// Full linear convolution of two kernels (size a + b - 1).
Kernel compose(const Kernel& a, const Kernel& b);

}  // namespace camhealth
