#include <gtest/gtest.h>

#include <numeric>

#include "camhealth/error.hpp"
#include "camhealth/metrics.hpp"
#include "camhealth/mtf_division.hpp"
#include "camhealth/kernel.hpp"

using namespace camhealth;

namespace {

MtfSamples shifted(MtfSamples m, double dh, double dv) {
  for (double& v : m.h) v += dh;
  for (double& v : m.v) v += dv;
  return m;
}

}  // namespace

TEST(Amae, Examples) {
  const MtfSamples gt = kernel_mtf(defocus_kernel(7));
  EXPECT_EQ(amae(gt, gt).amae, 0.0);
  const MtfSamples both = shifted(gt, 0.05, 0.05);
  EXPECT_NEAR(amae(both, gt).amae, 5.0, 1e-12);
  const AmaeScore h = amae(shifted(gt, 0.1, 0.0), gt);
  EXPECT_NEAR(h.mae_h, 10.0, 1e-12);
  EXPECT_NEAR(h.mae_v, 0.0, 1e-12);
  EXPECT_NEAR(h.amae, 5.0, 1e-12);
}

TEST(Amae, MaskedUsesOnlyFlaggedSamples) {
  const MtfSamples gt = MtfSamples::ones();
  MtfSamples est = gt;
  est.h[7] = 0.0;
  std::array<bool, kMtfSampleCount> use{};
  use.fill(true);
  use[7] = false;
  EXPECT_EQ(amae_masked(est, gt, use, use).amae, 0.0);
  std::array<bool, kMtfSampleCount> none{};
  EXPECT_THROW(amae_masked(est, gt, none, use), InvalidArgument);
}

TEST(ExpectedAmae, Examples) {
  EXPECT_EQ(expected_amae(0, 0), 0.0);
  EXPECT_NEAR(expected_amae(3, 4), 5.0, 1e-12);
  EXPECT_THROW(expected_amae(-1, 2), InvalidArgument);
}

TEST(RobustStats, Examples) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  std::swap(v[3], v[70]);
  const RobustStats s = robust_stats(v);
  EXPECT_EQ(s.min, 3.0);
  EXPECT_EQ(s.max, 98.0);
  EXPECT_EQ(s.median, 50.5);
  EXPECT_EQ(s.n_samples, 100u);
  const double one[] = {4.2};
  const RobustStats o = robust_stats(one);
  EXPECT_EQ(o.min, 4.2);
  EXPECT_EQ(o.median, 4.2);
  EXPECT_EQ(o.max, 4.2);
  const std::vector<double> same(37, 6.0);
  const RobustStats c = robust_stats(same);
  EXPECT_EQ(c.min, 6.0);
  EXPECT_EQ(c.median, 6.0);
  EXPECT_EQ(c.max, 6.0);
  EXPECT_THROW(robust_stats(std::vector<double>{}), InvalidArgument);
}

TEST(AmaeTable, CsvLayout) {
  AmaeTable t;
  t.set("b", "defocus-3", 1.234);
  t.set("a", "defocus-3", 2.0);
  t.set("a", "lin-motion-7", 3.456);
  EXPECT_EQ(t.to_csv(), "method,defocus-3,lin-motion-7\na,2.00,3.46\nb,1.23,\n");
}

TEST(DivideMtf, RoundTripOnGrids) {
  for (int d1 : kBlurSizeGrid) {
    for (int d2 : kBlurSizeGrid) {
      const Kernel b1 = defocus_kernel(d1);
      const Kernel b2 = linear_motion_kernel(d2, 0);
      const MtfSamples gt1 = kernel_mtf(b1);
      const PartialMtf r = divide_mtf(kernel_mtf(compose(b1, b2)), kernel_mtf(b2));
      for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
        if (r.h[i]) {
          EXPECT_NEAR(*r.h[i], gt1.h[i], 1e-6);
        }
        if (r.v[i]) {
          EXPECT_NEAR(*r.v[i], gt1.v[i], 1e-6);
        }
      }
    }
  }
}

TEST(DivideMtf, GuardOmitsSmallKnownValues) {
  MtfSamples combined = MtfSamples::ones();
  for (double& v : combined.h) v = 0.5;
  MtfSamples known = MtfSamples::ones();
  known.h[7] = 0.05;
  const PartialMtf r = divide_mtf(combined, known);
  EXPECT_FALSE(r.h[7].has_value());
  EXPECT_EQ(r.omitted_h(), std::vector<std::size_t>{7});
  EXPECT_TRUE(r.omitted_v().empty());
  EXPECT_FALSE(r.mask_h()[7]);
  EXPECT_EQ(r.filled(-1).h[7], -1.0);
}

TEST(DivideMtf, ClampsAndCounts) {
  MtfSamples combined = MtfSamples::ones();
  MtfSamples known = MtfSamples::ones();
  known.h[0] = 0.5;
  known.v[1] = 0.8;
  const PartialMtf r = divide_mtf(combined, known);
  EXPECT_EQ(*r.h[0], 1.0);
  EXPECT_EQ(*r.v[1], 1.0);
  EXPECT_EQ(r.clamp_count, 2);
}

TEST(DivideMtf, GuardMonotone) {
  const MtfSamples combined = kernel_mtf(compose(defocus_kernel(11), linear_motion_kernel(7, 0)));
  const MtfSamples known = kernel_mtf(linear_motion_kernel(7, 0));
  std::size_t prev = 0;
  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    std::size_t omitted = 0;
    try {
      const PartialMtf r = divide_mtf(combined, known, DivisionGuard{eps});
      omitted = r.omitted_h().size() + r.omitted_v().size();
    } catch (const DataError&) {
      omitted = 2 * kMtfSampleCount;
    }
    EXPECT_GE(omitted, prev);
    prev = omitted;
  }
}

TEST(DivideMtf, Errors) {
  MtfSamples zero;
  EXPECT_THROW(divide_mtf(zero, MtfSamples::ones()), DataError);
  EXPECT_THROW(divide_mtf(MtfSamples::ones(), MtfSamples::ones(), DivisionGuard{1.0}), InvalidArgument);
  EXPECT_THROW(divide_mtf(MtfSamples::ones(), MtfSamples::ones(), DivisionGuard{0.0}), InvalidArgument);
}

TEST(MinEnvelope, Properties) {
  const MtfSamples a = kernel_mtf(defocus_kernel(3));
  const MtfSamples b = kernel_mtf(defocus_kernel(11));
  EXPECT_EQ(min_envelope_over_time(std::vector<MtfSamples>{a}), a);
  EXPECT_EQ(min_envelope_over_time(std::vector<MtfSamples>{a, b}), b);
  const MtfSamples c = kernel_mtf(linear_motion_kernel(7, 45));
  const std::vector<MtfSamples> seq = {a, c, b, shifted(c, 0.1, -0.05)};
  const MtfSamples env = min_envelope_over_time(seq);
  for (const MtfSamples& m : seq) {
    for (std::size_t i = 0; i < kMtfSampleCount; ++i) {
      EXPECT_LE(env.h[i], m.h[i]);
      EXPECT_LE(env.v[i], m.v[i]);
    }
  }
  const std::vector<MtfSamples> rev(seq.rbegin(), seq.rend());
  EXPECT_EQ(min_envelope_over_time(rev), env);
  EXPECT_EQ(min_envelope_over_time(std::vector<MtfSamples>{env, env}), env);
  EXPECT_THROW(min_envelope_over_time(std::vector<MtfSamples>{}), InvalidArgument);
}

TEST(DivisionRecord, JsonShape) {
  MtfSamples known = MtfSamples::ones();
  known.h[7] = 0.05;
  const std::string j = division_record_json(divide_mtf(MtfSamples::ones(), known));
  EXPECT_NE(j.find("\"recovered\""), std::string::npos);
  EXPECT_NE(j.find("\"omitted_frequencies\""), std::string::npos);
  EXPECT_NE(j.find("null"), std::string::npos);
  EXPECT_NE(j.find("\"clamp_count\""), std::string::npos);
}
