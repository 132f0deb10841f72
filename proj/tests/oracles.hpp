#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. None of these call into the library's implementation of the same
// quantity.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "camhealth/detection.hpp"
#include "camhealth/rng.hpp"

namespace oracle {

// |sin(pi f d) / (d sin(pi f))|: transfer magnitude of a 1 x d box.
inline double periodic_sinc(double f, int d) {
  return std::abs(std::sin(std::numbers::pi * f * d) / (d * std::sin(std::numbers::pi * f)));
}

inline double box_iou(const camhealth::DetBox& a, const camhealth::DetBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// All-points AP of a ranked TP/FP sequence.
inline double ap_of_sequence(const std::vector<bool>& tp, std::size_t n_gt) {
  if (n_gt == 0) return tp.empty() ? 1.0 : 0.0;
  std::vector<double> prec;
  std::vector<double> rec;
  double hits = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    hits += tp[i] ? 1 : 0;
    prec.push_back(hits / static_cast<double>(i + 1));
    rec.push_back(hits / static_cast<double>(n_gt));
  }
  double ap = 0.0;
  double prev_rec = 0.0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (!tp[i]) continue;
    double best = 0.0;
    for (std::size_t j = i; j < tp.size(); ++j) best = std::max(best, prec[j]);
    ap += (rec[i] - prev_rec) * best;
    prev_rec = rec[i];
  }
  return ap;
}

// Maximum AP over every one-to-one assignment of detections (ranked by
// confidence, stable) to ground truths with IoU >= threshold.
inline double exhaustive_ap(std::vector<camhealth::DetBox> dets, const std::vector<camhealth::DetBox>& gts,
                            double threshold = 0.5) {
  std::stable_sort(dets.begin(), dets.end(), [](const auto& a, const auto& b) {
    return a.confidence.value_or(1.0) > b.confidence.value_or(1.0);
  });
  double best = 0.0;
  std::vector<int> used(gts.size(), 0);
  std::vector<bool> tp(dets.size(), false);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == dets.size()) {
      best = std::max(best, ap_of_sequence(tp, gts.size()));
      return;
    }
    tp[i] = false;
    self(self, i + 1);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || box_iou(dets[i], gts[g]) < threshold) continue;
      used[g] = 1;
      tp[i] = true;
      self(self, i + 1);
      tp[i] = false;
      used[g] = 0;
    }
  };
  rec(rec, 0);
  if (gts.empty() && dets.empty()) return 1.0;
  return best;
}

// Random instance with up to four disjoint GT boxes (one per quadrant of a
// 200 x 200 frame) and up to four detections jittered around them.
struct ApInstance {
  std::vector<camhealth::DetBox> dets;
  std::vector<camhealth::DetBox> gts;
};

inline ApInstance random_instance(std::uint64_t seed) {
  std::uint64_t state = seed;
  auto uniform = [&]() {
    state = camhealth::split_seed(state, 1);
    return static_cast<double>(state >> 11) / 9007199254740992.0;
  };
  ApInstance inst;
  const int n_gt = static_cast<int>(uniform() * 5);
  for (int i = 0; i < n_gt; ++i) {
    const double cx = (i % 2) * 100.0;
    const double cy = (i / 2) * 100.0;
    inst.gts.push_back({"car", cx + 10 + uniform() * 20, cy + 10 + uniform() * 20, 30 + uniform() * 30,
                        30 + uniform() * 30, std::nullopt});
  }
  const int n_det = static_cast<int>(uniform() * 5);
  for (int i = 0; i < n_det; ++i) {
    camhealth::DetBox d{"car", uniform() * 160, uniform() * 160, 20 + uniform() * 40, 20 + uniform() * 40,
                        std::round(uniform() * 1000) / 1000};
    if (!inst.gts.empty() && uniform() < 0.75) {
      const auto& g = inst.gts[static_cast<std::size_t>(uniform() * static_cast<double>(inst.gts.size()))];
      d.x = g.x + (uniform() - 0.5) * 0.5 * g.w;
      d.y = g.y + (uniform() - 0.5) * 0.5 * g.h;
      d.w = g.w * (0.8 + 0.4 * uniform());
      d.h = g.h * (0.8 + 0.4 * uniform());
    }
    inst.dets.push_back(d);
  }
  return inst;
}

}  // namespace oracle
