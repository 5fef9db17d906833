#include "regen/perfect.hpp"

#include <gtest/gtest.h>

#include "regen/error.hpp"
#include "regen/oracle.hpp"
#include "regen/stats.hpp"
#include "regen/zoo.hpp"

using namespace regen;

TEST(PerfectSamples, RequiresDoeblin) {
  const auto zoo = zoo::drift_chain(10, 0.3, 1.3);
  RandomStream rng(1);
  try {
    perfect_samples(zoo.model, 10, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDoeblin);
  }
}

TEST(PerfectSamples, ChiSquareOnDoeblinZoo) {
  for (const auto& zoo : zoo::all_models()) {
    if (!zoo.model.is_doeblin()) continue;
    RandomStream rng(2, 0, StreamRole::Perfect);
    const auto draws = perfect_samples(zoo.model, 100000, rng);
    ASSERT_EQ(draws.states.size(), 100000u);
    const Vector pi = oracle::stationary(zoo.model.kernel());
    std::vector<std::uint64_t> counts(pi.size(), 0);
    for (auto s : draws.states) ++counts[s];
    EXPECT_GT(stats::chi_square_gof(counts, std::span<const double>(pi.data(), pi.size())).p_value,
              0.001)
        << zoo.name;
    std::vector<double> fx;
    for (auto s : draws.states) fx.push_back(zoo.f[s]);
    EXPECT_LT(std::abs(stats::lag1_autocorrelation(fx)), 3 / std::sqrt(1e5)) << zoo.name;
  }
}

TEST(PerfectSamples, StepsAboutROverBeta) {
  const auto zoo = zoo::two_state_example(0.5);
  std::vector<double> steps;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    RandomStream rng(3, rep, StreamRole::Perfect);
    steps.push_back(static_cast<double>(perfect_samples(zoo.model, 1000, rng).steps));
  }
  const auto s = stats::mean_se(steps);
  EXPECT_NEAR(s.mean, 2000.0, 3 * s.se);
}

TEST(PerfectSamples, BetaOneIsRawTrajectory) {
  const std::vector<double> target = zoo::default_imh_target();
  const auto zoo = zoo::independence_mh(target, target);
  RandomStream a(4);
  const auto draws = perfect_samples(zoo.model, 500, a);
  EXPECT_EQ(draws.steps, 500u);
  RandomStream b(4);
  const auto path = simulate_path(zoo.model, 500, b);
  for (std::size_t i = 0; i < 500; ++i) EXPECT_EQ(draws.states[i], path.states[i]);
}

TEST(EstimatePerfect, MeanAndBound) {
  PerfectDraws draws{{0, 1, 1, 0}, 8};
  const std::vector<double> f{1.0, 3.0};
  const auto r = estimate_perfect(draws, f, 0.25);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_DOUBLE_EQ(*r.mse_bound, 0.0625);
  EXPECT_EQ(r.samples_used, 8u);
  const std::vector<double> c{7.0, 7.0};
  EXPECT_DOUBLE_EQ(estimate_perfect(draws, c).value, 7.0);
  try {
    estimate_perfect(PerfectDraws{}, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySampleList);
  }
}
