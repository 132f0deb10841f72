#include "camhealth/convolve.hpp"

#include <vector>

#include "camhealth/error.hpp"

namespace camhealth {
namespace {

struct Tap {
  int dx;
  int dy;
  double w;
};

std::vector<Tap> nonzero_taps(const Kernel& k) {
  std::vector<Tap> taps;
  const int r = k.radius();
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double w = k.at(dx, dy);
      if (w != 0.0) taps.push_back({dx, dy, w});
    }
  }
  return taps;
}

void check_fits(const GrayImage& img, const Kernel& k) {
  if (k.size() > img.width() || k.size() > img.height()) {
    throw InvalidArgument("convolve: kernel larger than image");
  }
}

double convolve_at(const GrayImage& img, const std::vector<Tap>& taps, int x, int y) {
  double acc = 0.0;
  for (const Tap& t : taps) {
    acc += t.w * img(reflect_index(x - t.dx, img.width()), reflect_index(y - t.dy, img.height()));
  }
  return acc;
}

}  // namespace

GrayImage convolve_serial(const GrayImage& img, const Kernel& k) {
  check_fits(img, k);
  const std::vector<Tap> taps = nonzero_taps(k);
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out(x, y) = convolve_at(img, taps, x, y);
    }
  }
  return out;
}

GrayImage convolve(const GrayImage& img, const Kernel& k) {
  check_fits(img, k);
  const std::vector<Tap> taps = nonzero_taps(k);
  const int w = img.width();
  const int h = img.height();
  const int r = k.radius();
  GrayImage out(w, h);
  const double* src = img.pixels().data();
  double* dst = out.pixels().data();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const bool row_interior = y >= r && y < h - r;
    for (int x = 0; x < w; ++x) {
      if (row_interior && x >= r && x < w - r) {
        double acc = 0.0;
        for (const Tap& t : taps) {
          acc += t.w * src[static_cast<std::size_t>(y - t.dy) * w + (x - t.dx)];
        }
        dst[static_cast<std::size_t>(y) * w + x] = acc;
      } else {
        dst[static_cast<std::size_t>(y) * w + x] = convolve_at(img, taps, x, y);
      }
    }
  }
  return out;
}

}  // namespace camhealth
