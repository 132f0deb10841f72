#include "camhealth/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "camhealth/error.hpp"
#include "camhealth/rng.hpp"

namespace camhealth {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Length of segment a-b inside the axis-aligned box [x0,x1]x[y0,y1]
// (Liang-Barsky clipping).
double clipped_length(Point2 a, Point2 b, double x0, double x1, double y0, double y1) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return 0.0;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return 0.0;
  }
  return (t1 - t0) * std::hypot(dx, dy);
}

void require_odd_size(int size) {
  if (size < 1 || size % 2 == 0) throw InvalidArgument("kernel size must be odd and positive");
}

}  // namespace

std::string to_string(KernelType type) {
  switch (type) {
    case KernelType::kIdentity: return "identity";
    case KernelType::kDefocus: return "defocus";
    case KernelType::kLinearMotion: return "linear-motion";
    case KernelType::kNonlinearMotion: return "nonlinear-motion";
    case KernelType::kComposite: return "composite";
  }
  return "unknown";
}

KernelType kernel_type_from_string(const std::string& name) {
  for (KernelType t : {KernelType::kIdentity, KernelType::kDefocus, KernelType::kLinearMotion,
                       KernelType::kNonlinearMotion, KernelType::kComposite}) {
    if (to_string(t) == name) return t;
  }
  throw InvalidArgument("unknown kernel type '" + name + "'");
}

Kernel::Kernel(int size, std::vector<double> weights, KernelInfo info)
    : size_(size), weights_(std::move(weights)), info_(info) {
  require_odd_size(size);
  if (weights_.size() != static_cast<std::size_t>(size) * size) {
    throw InvalidArgument("Kernel: weight count does not match size");
  }
  if (std::any_of(weights_.begin(), weights_.end(), [](double w) { return w < 0.0; })) {
    throw InvalidArgument("Kernel: weights must be non-negative");
  }
  if (std::abs(sum() - 1.0) > 1e-9) throw InvalidArgument("Kernel: weights must sum to 1");
}

Kernel Kernel::identity(int size) {
  require_odd_size(size);
  std::vector<double> w(static_cast<std::size_t>(size) * size, 0.0);
  w[w.size() / 2] = 1.0;
  return Kernel(size, std::move(w), {});
}

double Kernel::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

Kernel Kernel::rotated90() const {
  // (dx, dy) -> (-dy, dx) maps the x axis onto the y axis.
  std::vector<double> w(weights_.size());
  const int r = radius();
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int nx = -dy;
      const int ny = dx;
      w[static_cast<std::size_t>(ny + r) * size_ + (nx + r)] = at(dx, dy);
    }
  }
  KernelInfo info = info_;
  info.orientation_deg = std::fmod(info.orientation_deg + 90.0, 360.0);
  return Kernel(size_, std::move(w), info);
}

double coc_diameter(double aperture, double focal_length, double s1_focused, double s2_actual) {
  if (s1_focused <= focal_length) {
    throw InvalidArgument("coc_diameter: focused distance must exceed focal length");
  }
  if (s2_actual <= 0.0) throw InvalidArgument("coc_diameter: object distance must be positive");
  return aperture * focal_length / (s1_focused - focal_length) *
         std::abs(s2_actual - s1_focused) / s2_actual;
}

Kernel defocus_kernel(int diameter_px, int size) {
  require_odd_size(size);
  if (diameter_px < 1 || diameter_px % 2 == 0) {
    throw InvalidArgument("defocus_kernel: diameter must be odd and >= 1");
  }
  if (diameter_px > size) throw InvalidArgument("defocus_kernel: diameter exceeds kernel size");
  const int r = size / 2;
  const double radius = (diameter_px - 1) / 2.0;
  std::vector<double> w(static_cast<std::size_t>(size) * size, 0.0);
  int inside = 0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) {
        w[static_cast<std::size_t>(dy + r) * size + (dx + r)] = 1.0;
        ++inside;
      }
    }
  }
  for (double& v : w) v /= inside;
  KernelInfo info;
  info.type = KernelType::kDefocus;
  info.extent_px = diameter_px;
  return Kernel(size, std::move(w), info);
}

double MotionPath::arc_length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    total += std::hypot(waypoints[i].x - waypoints[i - 1].x, waypoints[i].y - waypoints[i - 1].y);
  }
  return total;
}

MotionPath linear_path(double length_px, double angle_deg) {
  const double c = std::cos(angle_deg * kDegToRad);
  const double s = std::sin(angle_deg * kDegToRad);
  const double h = length_px / 2.0;
  MotionPath path;
  path.waypoints = {{-h * c, -h * s}, {h * c, h * s}};
  path.segment_weights = {1.0};
  return path;
}

MotionPath random_smooth_path(double length_px, std::uint64_t seed) {
  constexpr int kSegments = 256;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  // Heading is a smooth function of normalized arc length; the bounded
  // coefficients keep the total turn well under a half circle.
  const double theta0 = uniform(0.0, 2.0 * std::numbers::pi);
  const double lin = uniform(-1.5, 1.5);
  const double quad = uniform(-2.0, 2.0);
  const double wave = uniform(-0.35, 0.35);
  const double phase = uniform(0.0, 2.0 * std::numbers::pi);
  const double w_amp = uniform(0.0, 0.4);
  const double w_freq = uniform(0.5, 2.0);
  const double w_phase = uniform(0.0, 2.0 * std::numbers::pi);

  MotionPath path;
  path.waypoints.reserve(kSegments + 1);
  path.segment_weights.reserve(kSegments);
  Point2 p{0.0, 0.0};
  path.waypoints.push_back(p);
  const double step = length_px / kSegments;
  for (int i = 0; i < kSegments; ++i) {
    const double s = (i + 0.5) / kSegments;
    const double u = s - 0.5;
    const double theta = theta0 + lin * u + quad * (u * u - 1.0 / 12.0) +
                         wave * std::sin(2.0 * std::numbers::pi * s + phase);
    p.x += step * std::cos(theta);
    p.y += step * std::sin(theta);
    path.waypoints.push_back(p);
    path.segment_weights.push_back(1.0 - w_amp * 0.5 *
                                             (1.0 + std::sin(2.0 * std::numbers::pi * w_freq * s + w_phase)));
  }
  // Center the bounding box on the kernel center.
  double min_x = p.x, max_x = p.x, min_y = p.y, max_y = p.y;
  for (const Point2& q : path.waypoints) {
    min_x = std::min(min_x, q.x);
    max_x = std::max(max_x, q.x);
    min_y = std::min(min_y, q.y);
    max_y = std::max(max_y, q.y);
  }
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);
  for (Point2& q : path.waypoints) {
    q.x -= cx;
    q.y -= cy;
  }
  return path;
}

Kernel motion_kernel(const MotionPath& path, double length_px, bool linear, int size) {
  require_odd_size(size);
  if (path.waypoints.size() < 2 || path.segment_weights.size() != path.waypoints.size() - 1) {
    throw InvalidArgument("motion_kernel: path needs >= 2 waypoints and one weight per segment");
  }
  const double total_length = path.arc_length();
  KernelInfo info;
  info.type = linear ? KernelType::kLinearMotion : KernelType::kNonlinearMotion;
  info.extent_px = length_px;
  info.linear = linear;
  const Point2 first = path.waypoints.front();
  const Point2 last = path.waypoints.back();
  info.orientation_deg = std::atan2(last.y - first.y, last.x - first.x) / kDegToRad;
  if (info.orientation_deg < 0.0) info.orientation_deg += 180.0;
  if (info.orientation_deg >= 180.0) info.orientation_deg -= 180.0;

  if (total_length <= 0.0) {
    if (length_px == 0.0 && linear) {
      Kernel id = Kernel::identity(size);
      return Kernel(size, id.weights(), info);
    }
    throw InvalidArgument("motion_kernel: degenerate path (all waypoints equal)");
  }

  const int r = size / 2;
  const double limit = r + 0.5;
  for (const Point2& q : path.waypoints) {
    if (std::abs(q.x) > limit || std::abs(q.y) > limit) {
      throw InvalidArgument("motion_kernel: path does not fit the kernel canvas");
    }
  }

  std::vector<double> w(static_cast<std::size_t>(size) * size, 0.0);
  for (std::size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
    const Point2 a = path.waypoints[s];
    const Point2 b = path.waypoints[s + 1];
    const double weight = path.segment_weights[s];
    if (weight < 0.0) throw InvalidArgument("motion_kernel: negative segment weight");
    const int x_lo = std::max(-r, static_cast<int>(std::floor(std::min(a.x, b.x) + 0.5)) - 1);
    const int x_hi = std::min(r, static_cast<int>(std::floor(std::max(a.x, b.x) + 0.5)) + 1);
    const int y_lo = std::max(-r, static_cast<int>(std::floor(std::min(a.y, b.y) + 0.5)) - 1);
    const int y_hi = std::min(r, static_cast<int>(std::floor(std::max(a.y, b.y) + 0.5)) + 1);
    for (int py = y_lo; py <= y_hi; ++py) {
      for (int px = x_lo; px <= x_hi; ++px) {
        const double len = clipped_length(a, b, px - 0.5, px + 0.5, py - 0.5, py + 0.5);
        if (len > 0.0) w[static_cast<std::size_t>(py + r) * size + (px + r)] += weight * len;
      }
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= 0.0) throw InvalidArgument("motion_kernel: path carries no intensity");
  for (double& v : w) v /= total;
  return Kernel(size, std::move(w), info);
}

Kernel linear_motion_kernel(double length_px, double angle_deg, int size) {
  if (length_px < 0.0) throw InvalidArgument("linear_motion_kernel: negative length");
  Kernel k = motion_kernel(linear_path(length_px, angle_deg), length_px, true, size);
  KernelInfo info = k.info();
  info.orientation_deg = angle_deg;
  return Kernel(k.size(), k.weights(), info);
}

double rasterized_arc_length(const MotionPath& path) {
  constexpr double kSamplesPerPx = 64.0;
  std::vector<std::pair<long, long>> walk;
  for (std::size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
    const Point2 a = path.waypoints[s];
    const Point2 b = path.waypoints[s + 1];
    const double seg = std::hypot(b.x - a.x, b.y - a.y);
    const int n = std::max(1, static_cast<int>(std::ceil(seg * kSamplesPerPx)));
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      const std::pair<long, long> p{static_cast<long>(std::floor(a.x + t * (b.x - a.x) + 0.5)),
                                    static_cast<long>(std::floor(a.y + t * (b.y - a.y) + 0.5))};
      if (walk.empty() || walk.back() != p) walk.push_back(p);
    }
  }
  if (walk.empty()) return 0.0;
  // Drop corner pixels so diagonal steps count as one 8-connected move.
  std::vector<std::pair<long, long>> chain{walk.front()};
  for (std::size_t i = 1; i < walk.size(); ++i) {
    if (i + 1 < walk.size()) {
      const auto& prev = chain.back();
      const auto& next = walk[i + 1];
      if (std::max(std::abs(next.first - prev.first), std::abs(next.second - prev.second)) <= 1) continue;
    }
    chain.push_back(walk[i]);
  }
  double length = 1.0;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    length += std::hypot(static_cast<double>(chain[i].first - chain[i - 1].first),
                         static_cast<double>(chain[i].second - chain[i - 1].second));
  }
  return length;
}

Kernel nonlinear_motion_kernel(double length_px, std::uint64_t seed, int size) {
  if (length_px < 2.0) throw InvalidArgument("nonlinear_motion_kernel: length must be >= 2");
  constexpr int kMaxDraws = 200;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    MotionPath path = random_smooth_path(length_px, split_seed(seed, static_cast<std::uint64_t>(attempt)));
    if (std::abs(rasterized_arc_length(path) - length_px) > 1.0) continue;
    try {
      Kernel k = motion_kernel(path, length_px, false, size);
      KernelInfo info = k.info();
      info.seed = seed;
      return Kernel(k.size(), k.weights(), info);
    } catch (const InvalidArgument&) {
      continue;  // did not fit the canvas
    }
  }
  throw InvalidArgument("nonlinear_motion_kernel: no curve of the requested length fits");
}

Kernel compose(const Kernel& a, const Kernel& b) {
  const int size = a.size() + b.size() - 1;
  const int ra = a.radius();
  const int rb = b.radius();
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size, 0.0);
  for (int ay = -ra; ay <= ra; ++ay) {
    for (int ax = -ra; ax <= ra; ++ax) {
      const double wa = a.at(ax, ay);
      if (wa == 0.0) continue;
      for (int by = -rb; by <= rb; ++by) {
        for (int bx = -rb; bx <= rb; ++bx) {
          w[static_cast<std::size_t>(ay + by + r) * size + (ax + bx + r)] += wa * b.at(bx, by);
        }
      }
    }
  }
  KernelInfo info;
  info.type = KernelType::kComposite;
  info.extent_px = a.info().extent_px + b.info().extent_px;
  info.linear = a.info().linear && b.info().linear;
  return Kernel(size, std::move(w), info);
}

}  // namespace camhealth
