#include "regen/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "regen/error.hpp"
#include "test_support.hpp"

using namespace regen;

namespace {

// Golden-section minimizer used as an independent check of the closed-form delta.
double golden_minimum(const std::function<double(double)>& g, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  for (int i = 0; i < 200; ++i) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    (g(c) < g(d) ? b : a) = (g(c) < g(d) ? d : c);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(RegTailBound, WorkedValue) {
  EXPECT_NEAR(reg_tail_bound(100, 2.0, 1.0, 1.0, 0.1, 0.5), 2.01, 1e-12);
  const auto report = make_report("reg_tail", 2.01, true, "ratio tail", {});
  EXPECT_DOUBLE_EQ(report.capped, 1.0);
  EXPECT_DOUBLE_EQ(report.value, 2.01);
}

TEST(RegTailBound, DoublingRHalves) {
  const double a = reg_tail_bound(100, 2.0, 0.75, 1.0, 0.1, 0.3);
  const double b = reg_tail_bound(200, 2.0, 0.75, 1.0, 0.1, 0.3);
  EXPECT_DOUBLE_EQ(a, 2 * b);
}

TEST(RegTailBound, RejectsDeltaOutsideUnitInterval) {
  EXPECT_THROW(reg_tail_bound(10, 1, 1, 1, 0.1, 0.0), Error);
  EXPECT_THROW(reg_tail_bound(10, 1, 1, 1, 0.1, 1.0), Error);
}

TEST(OptimalDelta, EdgeCases) {
  EXPECT_DOUBLE_EQ(optimal_delta(1.0, 0.0, 0.1), 0.0);
  // sigma_as^{2/3} eps^{-2/3} = sigma_tau^{2/3} when sigma_as^2 = eps^2 sigma_tau^2
  EXPECT_NEAR(optimal_delta(0.01 * 2.0, 2.0, 0.1), 0.5, 1e-15);
  EXPECT_THROW(optimal_delta(0.0, 0.0, 0.1), Error);
}

TEST(OptimalDelta, MatchesGoldenSectionAndBeatsGrid) {
  const double expected = 1.0 / (std::cbrt(0.75) * std::pow(0.1, -2.0 / 3.0) + 1.0);
  EXPECT_NEAR(optimal_delta(0.75, 1.0, 0.1), expected, 1e-15);
  for (double m : {1.0, 2.0, 5.0}) {
    const auto g = [m](double d) { return reg_tail_bound(1000, m, 0.75, 1.0, 0.1, d); };
    const double star = optimal_delta(0.75, 1.0, 0.1, m);
    EXPECT_NEAR(star, golden_minimum(g, 1e-9, 1 - 1e-9), 1e-6) << m;
    const double at_star = g(star);
    for (int i = 1; i <= 999; ++i) EXPECT_LE(at_star, g(i / 1000.0)) << m << " " << i;
    EXPECT_DOUBLE_EQ(reg_tail_bound_optimal(1000, m, 0.75, 1.0, 0.1), at_star);
  }
}

TEST(UnbiasedBounds, Values) {
  const auto b = unbiased_bounds(10000, 2.0, 1.0, 0.1);
  EXPECT_NEAR(b.mse, 5e-5, 1e-18);
  EXPECT_DOUBLE_EQ(unbiased_bounds(10000, 2.0, 1.0, 1.0).tail, b.mse);
  EXPECT_NEAR(unbiased_bounds(10000, 2.0, 1.0, 0.05).tail, 4 * b.tail, 1e-15);
}

TEST(RegSeqBounds, Values) {
  const auto b = regseq_bounds(1000, 0.75, 3.0, 0.1);
  EXPECT_NEAR(b.mse, 7.5225e-4, 1e-15);
  EXPECT_NEAR(b.tail, 7.5225e-2, 1e-13);
  EXPECT_DOUBLE_EQ(b.expected_T, 1003.0);
  EXPECT_DOUBLE_EQ(regseq_bounds(1000, 0.75, 0.0, 0.1).mse, 0.75 / 1000);
  EXPECT_GT(b.mse / regseq_bounds(10000, 0.75, 3.0, 0.1).mse, 10.0);
}

TEST(DoeblinMoments, Values) {
  const auto a = doeblin_moments(0.5);
  EXPECT_DOUBLE_EQ(a.m, 2);
  EXPECT_DOUBLE_EQ(a.sigma_tau_sq, 1);
  EXPECT_DOUBLE_EQ(a.C0, 3);
  const auto b = doeblin_moments(1.0);
  EXPECT_DOUBLE_EQ(b.m, 1);
  EXPECT_DOUBLE_EQ(b.sigma_tau_sq, 0);
  EXPECT_DOUBLE_EQ(b.C0, 1);
  const auto c = doeblin_moments(0.1);
  EXPECT_NEAR(c.m, 10, 1e-12);
  EXPECT_NEAR(c.sigma_tau_sq, 9, 1e-12);
  EXPECT_NEAR(c.C0, 19, 1e-12);
  EXPECT_THROW(doeblin_moments(0.0), Error);
}

TEST(DoeblinVarianceBound, Values) {
  EXPECT_DOUBLE_EQ(doeblin_variance_bound(0.3, 1.0, true).value, 0.3);
  EXPECT_DOUBLE_EQ(doeblin_variance_bound(0.3, 1.0, false).value, 0.3);
  EXPECT_NEAR(doeblin_variance_bound(0.25, 0.5, true).value, 0.75, 1e-15);
  const auto g = doeblin_variance_bound(0.25, 0.5, false);
  EXPECT_NEAR(g.value, 1.457106781186548, 1e-12);
  EXPECT_DOUBLE_EQ(g.loose, 2.0);
  EXPECT_LE(g.value, g.loose);
}

TEST(DriftBounds, WorkedExample) {
  const DriftParams p{0.25, 2.0, 0.5, 2.0, 1.4, 1.0};
  const auto b = drift_bounds(p);
  EXPECT_NEAR(b.sigma_as_bound, 6 + 2 * (std::sqrt(2.0) - 1.25) / 0.25 * 1.4, 1e-12);
  EXPECT_NEAR(b.sigma_as_bound, 7.839, 1e-3);
  EXPECT_NEAR(b.C0_bound, 2.057, 1e-3);
  EXPECT_DOUBLE_EQ(b.sigma_tau_bound, b.C0_bound - 1);
  EXPECT_FALSE(b.negative_component);
  auto zero = p;
  zero.f_norm = 0;
  EXPECT_DOUBLE_EQ(drift_bounds(zero).sigma_as_bound, 0.0);
}

TEST(DriftBounds, ValidatesParameters) {
  EXPECT_THROW(drift_bounds({1.0, 2.0, 0.5, 2.0, 1.4, 1.0}), Error);
  EXPECT_THROW(drift_bounds({0.25, 0.5, 0.5, 2.0, 1.4, 1.0}), Error);
  // Jensen: pi V^{1/2} <= (pi V)^{1/2}
  EXPECT_THROW(drift_bounds({0.25, 2.0, 0.5, 2.0, 1.5, 1.0}), Error);
  EXPECT_TRUE(drift_bounds({0.25, 1.0, 1.0, 2.0, 1.4, 1.0}).negative_component);
}

TEST(MLowerBound, Values) {
  EXPECT_DOUBLE_EQ(m_lower_bound(0.5), 2.0);
  EXPECT_DOUBLE_EQ(m_lower_bound(1.0), 1.0);
  EXPECT_THROW(m_lower_bound(0.0), Error);
}

TEST(KlmTail, VacuousThresholdAndMonotone) {
  // n - 1 = 3 |f| / (2 beta eps) = 30
  EXPECT_DOUBLE_EQ(klm_exponential_tail(31, 1.0, 0.5, 0.1), 2.0);
  double prev = 2.0;
  for (std::uint64_t n = 32; n < 3000; n += 17) {
    const double v = klm_exponential_tail(n, 1.0, 0.5, 0.1);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(klm_exponential_tail(1, 1.0, 0.5, 0.1), Error);
}

TEST(KlmSampleSize, SmallestAdmissibleN) {
  const auto n = klm_sample_size(1.0, 0.5, 0.1, 0.05);
  EXPECT_LE(klm_exponential_tail(n, 1.0, 0.5, 0.1), 0.05);
  EXPECT_GT(klm_exponential_tail(n - 1, 1.0, 0.5, 0.1), 0.05);
  // Linear scan oracle.
  std::uint64_t scan = 2;
  while (klm_exponential_tail(scan, 1.0, 0.5, 0.1) > 0.05) ++scan;
  EXPECT_EQ(n, scan);
  const double asym = klm_asymptotic_size(1.0, 0.5, 0.1, 0.05);
  EXPECT_NEAR(asym, 200 * std::log(40.0), 1e-9);
  EXPECT_GT(static_cast<double>(n), asym);
  EXPECT_LT(static_cast<double>(n), 1.5 * asym);
}

TEST(NormalQuantile, AgainstBisection) {
  EXPECT_NEAR(normal_quantile(0.975), 1.95996, 5e-6);
  for (double p : {1e-10, 1e-5, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.995, 1 - 1e-7}) {
    EXPECT_NEAR(normal_quantile(p), reference::bisect_normal_quantile(p), 1e-8) << p;
  }
  EXPECT_THROW(normal_quantile(0.0), Error);
  EXPECT_THROW(normal_quantile(1.0), Error);
}

TEST(CltSampleSize, Values) {
  EXPECT_NEAR(clt_sample_size(0.75, 0.1, 0.05), 288.1, 0.05);
  EXPECT_NEAR(clt_sample_size(0.75, 0.025, 0.05), 16 * clt_sample_size(0.75, 0.1, 0.05), 1e-9);
}
