#pragma once

#include "camhealth/image.hpp"
#include "camhealth/kernel.hpp"

namespace camhealth {

// Linear convolution with half-sample symmetric reflection at the borders;
// output has the input's size. Rows are distributed over OpenMP threads,
// each output pixel sums its taps in a fixed order, so the result is
// bit-identical to convolve_serial for any thread count.
GrayImage convolve(const GrayImage& img, const Kernel& k);

// Single-threaded reference implementation.
GrayImage convolve_serial(const GrayImage& img, const Kernel& k);

// Index reflection used for out-of-range taps: ... c b a | a b c ... .
inline int reflect_index(int i, int n) {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - i - 1;
  return i;
}

}  // namespace camhealth
