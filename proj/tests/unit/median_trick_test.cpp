#include "regen/median_trick.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "regen/error.hpp"
#include "regen/oracle.hpp"
#include "regen/zoo.hpp"

using namespace regen;

TEST(Constants, RecomputedFromAStar) {
  EXPECT_NEAR(median_c1(), 8.3549, 1e-4);
  EXPECT_NEAR(median_c2(), 2.3147, 1e-3);
  EXPECT_NEAR(median_c1() * median_c2(), 19.34, 1e-2);
}

TEST(ChernoffFailure, Values) {
  for (std::uint64_t l : {1u, 3u, 7u, 21u}) EXPECT_DOUBLE_EQ(chernoff_failure(0.5, l), 0.5);
  EXPECT_NEAR(4 * kAStar * (1 - kAStar), 0.42146, 1e-5);
  EXPECT_NEAR(chernoff_failure(kAStar, 7), 0.0243, 1e-4);
  double prev = 1.0;
  for (std::uint64_t l = 1; l < 40; l += 2) {
    const double v = chernoff_failure(0.2, l);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(chernoff_failure(kAStar, 4), Error);
  EXPECT_THROW(chernoff_failure(0.0, 3), Error);
}

TEST(MakePlan, WorkedExample) {
  const Plan plan = make_plan(0.75, 3.0, 0.1, 0.05);
  EXPECT_EQ(plan.n, 630u);
  EXPECT_EQ(plan.l, 7u);
  EXPECT_DOUBLE_EQ(plan.expected_cost, 7.0 * 633.0);
  EXPECT_NEAR(plan.asymptotic_cost, median_c1() * median_c2() * 75 * std::log(10.0), 1e-9);
  EXPECT_EQ(plan.l % 2, 1u);
  EXPECT_LE(chernoff_failure(plan.a_star, plan.l), 0.05);
}

TEST(MakePlan, BoundaryAlphaIsInclusive) {
  EXPECT_EQ(make_plan(0.75, 3.0, 0.1, chernoff_failure(kAStar, 7)).l, 7u);
  EXPECT_EQ(smallest_odd_replicates(kAStar, chernoff_failure(kAStar, 7)), 7u);
  EXPECT_EQ(smallest_odd_replicates(kAStar, chernoff_failure(kAStar, 7) * (1 - 1e-9)), 9u);
}

TEST(MakePlan, InequalityChainHolds) {
  for (double s : {0.1, 0.75, 3.0, 40.0}) {
    for (double c0 : {1.0, 3.0, 19.0}) {
      for (double eps : {0.01, 0.1, 0.3}) {
        const Plan p = make_plan(s, c0, eps, 0.01);
        const double n = static_cast<double>(p.n);
        EXPECT_LE(median_c1() * s / (eps * eps * n), 1 - c0 / n + 1e-12);
        EXPECT_LE(s / (n * eps * eps) * (1 + c0 / n), kAStar * (1 + 1e-12));
      }
    }
  }
}

TEST(MakePlan, LeadingTermScales) {
  const Plan a = make_plan(0.75, 0.0, 0.1, 0.05);
  const Plan b = make_plan(3.0, 0.0, 0.1, 0.05);
  EXPECT_NEAR(static_cast<double>(b.n) / static_cast<double>(a.n), 4.0, 0.01);
  EXPECT_EQ(a.l, b.l);
  EXPECT_THROW(make_plan(0.75, 3.0, 0.1, 0.5), Error);
}

TEST(MedianOf, OddAndPermutation) {
  std::vector<double> v{5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(median_of(v), 3);
  std::sort(v.begin(), v.end());
  do {
    EXPECT_DOUBLE_EQ(median_of(v), 3);
  } while (std::next_permutation(v.begin(), v.end()));
  EXPECT_DOUBLE_EQ(median_of(std::vector<double>{7}), 7);
  EXPECT_THROW(median_of(std::vector<double>{}), Error);
}

TEST(RunMedian, SingleReplicateAndConstantF) {
  const auto zoo = zoo::two_state_example(0.5);
  Plan plan = make_plan(0.75, 3.0, 0.1, 0.4);
  ASSERT_EQ(plan.l, 1u);
  const auto one = run_median(plan, zoo.model, zoo.f, 5);
  EXPECT_DOUBLE_EQ(one.median, one.runs[0].value);
  plan = make_plan(0.75, 3.0, 0.1, 0.05);
  const std::vector<double> c{0.5, 0.5};
  EXPECT_DOUBLE_EQ(run_median(plan, zoo.model, c, 5).median, 0.5);
}

TEST(RunMedian, DeterministicAcrossJobs) {
  const auto zoo = zoo::independence_mh(zoo::default_imh_target(), std::vector<double>(10, 0.1));
  const Plan plan = make_plan(1.0, 5.0, 0.1, 0.01);
  const auto a = run_median(plan, zoo.model, zoo.f, 17, {}, 1);
  const auto b = run_median(plan, zoo.model, zoo.f, 17, {}, 4);
  ASSERT_EQ(a.runs.size(), plan.l);
  EXPECT_EQ(a.median, b.median);
  EXPECT_EQ(a.total_steps, b.total_steps);
  for (std::size_t j = 0; j < a.runs.size(); ++j) EXPECT_EQ(a.runs[j].value, b.runs[j].value);
}

TEST(RunMedian, TotalCostConcentrates) {
  for (const auto& zoo : zoo::all_models()) {
    const auto moments = oracle::tour_moments_exact(zoo.model, zoo.f);
    const Plan plan = make_plan(moments.sigma_as_sq, moments.C0, 0.02, 0.01);
    ASSERT_GE(plan.n, 1000u) << zoo.name;
    const auto out = run_median(plan, zoo.model, zoo.f, 3);
    const double ratio = static_cast<double>(out.total_steps) /
                         (static_cast<double>(plan.l) * (static_cast<double>(plan.n) + moments.C0));
    EXPECT_GT(ratio, 0.9) << zoo.name;
    EXPECT_LT(ratio, 1.1) << zoo.name;
  }
}

TEST(CompareCosts, OrderingAtSmallBeta) {
  const auto c = compare_costs(0.02, 0.25, 1.0, 0.01, 0.01);
  EXPECT_LE(c.perfect_cost, c.reversible.expected_cost);
  EXPECT_LE(c.reversible.expected_cost, c.general.expected_cost);
  EXPECT_LE(c.general.expected_cost, static_cast<double>(c.klm_n));
  EXPECT_EQ(c.general.l, 11u);
}
