#include "regen/zoo.hpp"

#include <gtest/gtest.h>

#include "regen/bounds.hpp"
#include "regen/error.hpp"
#include "regen/oracle.hpp"

using namespace regen;

TEST(TwoState, MatrixAndWarnings) {
  const auto zoo = zoo::two_state_example(0.5);
  Matrix expected(2, 2);
  expected << 0.75, 0.25, 0.25, 0.75;
  EXPECT_TRUE(zoo.model.kernel().matrix().isApprox(expected, 1e-15));
  EXPECT_TRUE(zoo.warnings.empty());
  EXPECT_TRUE(zoo.reversible);
  EXPECT_FALSE(zoo::two_state_example(0.8).warnings.empty());
  EXPECT_THROW(zoo::two_state_example(0.0), Error);
  EXPECT_THROW(zoo::two_state_example(1.5), Error);
}

TEST(IndependenceMh, UniformProposal) {
  const std::vector<double> target = zoo::default_imh_target();
  const auto zoo = zoo::independence_mh(target, std::vector<double>(10, 0.1));
  double worst = 1.0;
  for (double t : target) worst = std::min(worst, 0.1 / t);
  EXPECT_NEAR(zoo.model.small_set().beta(), worst, 1e-15);
  const Matrix& p = zoo.model.kernel().matrix();
  for (int x = 0; x < 10; ++x) {
    for (int y = 0; y < 10; ++y) EXPECT_NEAR(target[x] * p(x, y), target[y] * p(y, x), 1e-12);
  }
  const Vector pi = oracle::stationary(zoo.model.kernel());
  for (int x = 0; x < 10; ++x) EXPECT_NEAR(pi[x], target[x], 1e-12);
  const double sas = oracle::asymptotic_variance_exact(zoo.model.kernel(), zoo.f);
  const double var = oracle::stationary_variance(zoo.model.kernel(), zoo.f);
  // The reversible bound is attained here, so compare with a rounding allowance.
  EXPECT_GE(doeblin_variance_bound(var, zoo.model.small_set().beta(), true).value, sas * (1 - 1e-12));
}

TEST(IndependenceMh, ProposalEqualsTarget) {
  const std::vector<double> target = zoo::default_imh_target();
  const auto zoo = zoo::independence_mh(target, target);
  EXPECT_DOUBLE_EQ(zoo.model.small_set().beta(), 1.0);
  for (int x = 0; x < 10; ++x) {
    for (int y = 0; y < 10; ++y) EXPECT_NEAR(zoo.model.kernel()(x, y), target[y], 1e-15);
  }
}

TEST(IndependenceMh, RejectsBadInputs) {
  std::vector<double> target = zoo::default_imh_target();
  std::vector<double> proposal(10, 0.1);
  proposal[0] = 0.0;
  proposal[1] = 0.2;
  try {
    zoo::independence_mh(target, proposal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedTarget);
  }
  EXPECT_THROW(zoo::independence_mh(target, std::vector<double>(9, 1.0 / 9)), Error);
}

TEST(DriftChain, LambdaAndRejection) {
  const auto zoo = zoo::drift_chain(30, 0.3, 1.3);
  ASSERT_TRUE(zoo.V.has_value());
  const auto d = oracle::drift_inputs_exact(zoo.model, *zoo.V);
  EXPECT_NEAR(d.lambda_hat, 0.9284615384615385, 1e-12);
  EXPECT_FALSE(zoo.model.is_doeblin());
  try {
    zoo::drift_chain(30, 0.5, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DriftNotSatisfied);
  }
  EXPECT_THROW(zoo::drift_chain(2, 0.3, 1.3), Error);
}

TEST(DriftChain, AsymptoticVarianceBoundHolds) {
  const auto zoo = zoo::drift_chain(30, 0.3, 1.3);
  const auto d = oracle::drift_inputs_exact(zoo.model, *zoo.V);
  const double f_norm = oracle::v_half_norm(zoo.model.kernel(), zoo.f, *zoo.V);
  const auto b = drift_bounds({d.lambda_hat, d.K_hat, zoo.model.small_set().beta(), d.pi_V,
                               d.pi_sqrtV, f_norm});
  EXPECT_GE(b.sigma_as_bound, oracle::asymptotic_variance_exact(zoo.model.kernel(), zoo.f));
}

TEST(AllModels, ValidAndClosedFormsAcrossBetaGrid) {
  const auto models = zoo::all_models();
  EXPECT_GE(models.size(), 4u);
  for (const auto& m : models) EXPECT_TRUE(oracle::is_irreducible(m.model.kernel())) << m.name;
  for (double beta : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto zoo = zoo::two_state_example(beta);
    const auto t = oracle::tour_moments_exact(zoo.model, zoo.f);
    EXPECT_NEAR(t.sigma_as_sq, (2 - beta) / beta * 0.25, 1e-12);
    EXPECT_NEAR(t.sigma_unb_sq, (3 - 2 * beta) / beta * 0.25, 1e-12);
  }
}
