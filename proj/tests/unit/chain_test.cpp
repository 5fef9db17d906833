#include "regen/chain.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "regen/error.hpp"
#include "regen/estimators.hpp"
#include "regen/oracle.hpp"
#include "regen/stats.hpp"
#include "regen/zoo.hpp"
#include "test_support.hpp"

using namespace regen;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(FiniteKernel, RejectsBadMatrices) {
  Matrix rows(2, 2);
  rows << 0.5, 0.6, 0.5, 0.5;
  EXPECT_EQ(code_of([&] { FiniteKernel{rows}; }), ErrorCode::InvalidStochasticMatrix);
  Matrix negative(2, 2);
  negative << 1.1, -0.1, 0.5, 0.5;
  EXPECT_EQ(code_of([&] { FiniteKernel{negative}; }), ErrorCode::InvalidStochasticMatrix);
  EXPECT_EQ(code_of([] { FiniteKernel{Matrix(2, 3)}; }), ErrorCode::InvalidStochasticMatrix);
}

TEST(SmallSet, ValidatesTriple) {
  EXPECT_EQ(code_of([] { SmallSet({false, false}, 0.5, vec({0.5, 0.5})); }),
            ErrorCode::InvalidSmallSet);
  EXPECT_EQ(code_of([] { SmallSet({true, false}, 0.0, vec({0.5, 0.5})); }),
            ErrorCode::InvalidSmallSet);
  EXPECT_EQ(code_of([] { SmallSet({true, false}, 0.5, vec({0.6, 0.5})); }),
            ErrorCode::InvalidSmallSet);
  EXPECT_EQ(code_of([] { SmallSet({true, false}, 1.5, vec({0.5, 0.5})); }),
            ErrorCode::InvalidSmallSet);
}

TEST(BuildSplitModel, TwoStateResidualIsIdentity) {
  const auto zoo = zoo::two_state_example(0.5);
  EXPECT_TRUE(zoo.model.residual().isApprox(Matrix::Identity(2, 2), 1e-15));
}

TEST(BuildSplitModel, BetaOneLeavesResidualUnused) {
  Matrix p(3, 3);
  p.rowwise() = vec({0.2, 0.3, 0.5}).transpose();
  const SplitModel model(FiniteKernel(p), SmallSet::whole_space(3, 1.0, vec({0.2, 0.3, 0.5})));
  for (std::size_t x = 0; x < 3; ++x) EXPECT_FALSE(model.residual_row_used(x));
  RandomStream rng(5);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(model.step_explicit(i % 3, rng).regenerated);
}

TEST(BuildSplitModel, RandomKernelReconstructs) {
  const Matrix p = reference::positive_stochastic(5, 99);
  const Vector pi = reference::power_stationary(p);
  Eigen::Index j = 0;
  pi.maxCoeff(&j);
  const Vector nu = vec({0.3, 0.1, 0.2, 0.15, 0.25});
  double ratio = INFINITY;
  for (Eigen::Index y = 0; y < 5; ++y) ratio = std::min(ratio, p(j, y) / nu[y]);
  const double beta = 0.9 * ratio;
  std::vector<bool> members(5, false);
  members[static_cast<std::size_t>(j)] = true;
  const SplitModel model(FiniteKernel(p), SmallSet(members, beta, nu));
  const Matrix& q = model.residual();
  for (Eigen::Index x = 0; x < 5; ++x) {
    EXPECT_NEAR(q.row(x).sum(), 1.0, 1e-10);
    EXPECT_GE(q.row(x).minCoeff(), 0.0);
  }
  const Vector rebuilt = beta * nu + (1 - beta) * q.row(j).transpose();
  EXPECT_LT((rebuilt - p.row(j).transpose()).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index x = 0; x < 5; ++x) {
    if (x != j) EXPECT_EQ(q.row(x), p.row(x));
  }
}

TEST(BuildSplitModel, ReportsWorstMinorizationPair) {
  Matrix p(2, 2);
  p << 0.9, 0.1, 0.5, 0.5;
  try {
    SplitModel(FiniteKernel(p), SmallSet::whole_space(2, 0.5, vec({0.5, 0.5})));
    FAIL() << "expected MinorizationViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MinorizationViolated);
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos) << e.what();
  }
}

TEST(StepExplicit, RegenerationFrequencyIsBeta) {
  const auto zoo = zoo::two_state_example(0.5);
  RandomStream rng(11);
  std::size_t x = 0;
  std::uint64_t hits = 0;
  const int steps = 1'000'000;
  for (int i = 0; i < steps; ++i) {
    const Step s = zoo.model.step_explicit(x, rng);
    hits += s.regenerated;
    x = s.next;
  }
  const double se = std::sqrt(0.25 / steps);
  EXPECT_NEAR(static_cast<double>(hits) / steps, 0.5, 3 * se);
}

TEST(StepExplicit, TwoStateHoldsStillWithoutRegeneration) {
  const auto zoo = zoo::two_state_example(0.3);
  RandomStream rng(12);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t x = i % 2;
    const Step s = zoo.model.step_explicit(x, rng);
    if (!s.regenerated) ASSERT_EQ(s.next, x);
  }
}

TEST(StepBothModes, NoRegenerationOutsideSmallSet) {
  const auto zoo = zoo::drift_chain(30, 0.3, 1.3);
  RandomStream rng(13);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t x = 1 + static_cast<std::size_t>(i % 29);
    ASSERT_FALSE(zoo.model.step_explicit(x, rng).regenerated);
    ASSERT_FALSE(zoo.model.step_mykland(x, rng).regenerated);
  }
}

TEST(StepMykland, RegenerationRatio) {
  const auto zoo = zoo::two_state_example(0.5);
  // beta nu(0) / P(0, 0) = 0.5 * 0.5 / 0.75
  EXPECT_NEAR(zoo.model.regeneration_probability(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(zoo.model.regeneration_probability(0, 1), 1.0, 1e-15);
}

TEST(StepMykland, JointLawMatchesExplicit) {
  for (const auto& zoo : {zoo::two_state_example(0.5), zoo::two_state_example(0.2)}) {
    RandomStream a(21);
    RandomStream b(22);
    const int steps = 1'000'000;
    std::map<std::pair<std::size_t, bool>, double> ea;
    std::map<std::pair<std::size_t, bool>, double> eb;
    for (int i = 0; i < steps; ++i) {
      const Step s = zoo.model.step_explicit(0, a);
      const Step t = zoo.model.step_mykland(0, b);
      ea[{s.next, s.regenerated}] += 1.0 / steps;
      eb[{t.next, t.regenerated}] += 1.0 / steps;
    }
    double tv = 0.0;
    for (std::size_t y = 0; y < 2; ++y) {
      for (bool g : {false, true}) tv += std::abs(ea[{y, g}] - eb[{y, g}]);
    }
    EXPECT_LT(tv / 2, 0.005);
  }
}

TEST(SimulateTours, GeometricLengthsOnTwoState) {
  const auto zoo = zoo::two_state_example(0.5);
  RandomStream rng(31);
  const auto tours = simulate_tours(zoo.model, zoo.f, 100000, rng);
  ASSERT_EQ(tours.size(), 100000u);
  std::vector<double> tau;
  for (const auto& t : tours) tau.push_back(static_cast<double>(t.tau));
  const auto s = stats::mean_se(tau);
  EXPECT_NEAR(s.mean, 2.0, 3 * s.se);
  // Var of the sample variance for Geometric(1/2): about (mu4 - sigma^4) / n with mu4 = 38.
  const double var_se = std::sqrt((38.0 - 4.0) / 100000.0);
  EXPECT_NEAR(s.variance, 2.0, 3 * var_se);
}

TEST(SimulateTours, ZeroFunctionGivesZeroBlocks) {
  const auto zoo = zoo::drift_chain(20, 0.3, 1.3);
  RandomStream rng(32);
  const std::vector<double> zero(20, 0.0);
  for (const auto& t : simulate_tours(zoo.model, zero, 1000, rng)) {
    EXPECT_EQ(t.xi_f, 0.0);
    EXPECT_GE(t.tau, 1u);
  }
}

TEST(SimulateTours, KacMeanBlockSum) {
  const auto zoo = zoo::two_state_example(0.5);
  RandomStream rng(33);
  std::vector<double> xi;
  for (const auto& t : simulate_tours(zoo.model, zoo.f, 100000, rng)) xi.push_back(t.xi_f);
  const auto s = stats::mean_se(xi);
  EXPECT_NEAR(s.mean, 1.0, 3 * s.se);
}

TEST(SimulateTours, TourInvariants) {
  for (const auto& zoo : zoo::all_models()) {
    RandomStream rng(34);
    double fmax = 0.0;
    for (double v : zoo.f) fmax = std::max(fmax, std::abs(v));
    for (const auto& t : simulate_tours(zoo.model, zoo.f, 2000, rng)) {
      ASSERT_GE(t.tau, 1u);
      ASSERT_LE(std::abs(t.xi_f), static_cast<double>(t.tau) * fmax + 1e-9);
      ASSERT_LT(t.last_state, zoo.model.states());
    }
  }
}

TEST(SimulateTours, LastStateIsInSmallSetForSingleStateJ) {
  const auto zoo = zoo::drift_chain(20, 0.3, 1.3);
  RandomStream rng(35);
  for (const auto& t : simulate_tours(zoo.model, zoo.f, 1000, rng)) EXPECT_EQ(t.last_state, 0u);
}

TEST(SimulateTours, CapOverflowThrows) {
  const auto zoo = zoo::two_state_example(0.01);
  RandomStream rng(36);
  SimulationOptions opts;
  opts.tour_cap = 3;
  try {
    simulate_tours(zoo.model, zoo.f, 1000, rng, opts);
    FAIL() << "expected TourLengthOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TourLengthOverflow);
  }
}

TEST(SimulateTours, DeterministicPerSeed) {
  const auto zoo = zoo::independence_mh(zoo::default_imh_target(),
                                        std::vector<double>(10, 0.1));
  for (auto mode : {SimulationMode::ExplicitSplit, SimulationMode::MyklandRetrospective}) {
    RandomStream a(77, 4, StreamRole::Tours);
    RandomStream b(77, 4, StreamRole::Tours);
    const auto ta = simulate_tours(zoo.model, zoo.f, 500, a, {mode});
    const auto tb = simulate_tours(zoo.model, zoo.f, 500, b, {mode});
    for (std::size_t k = 0; k < ta.size(); ++k) {
      ASSERT_EQ(ta[k].tau, tb[k].tau);
      ASSERT_EQ(ta[k].xi_f, tb[k].xi_f);
      ASSERT_EQ(ta[k].last_state, tb[k].last_state);
    }
  }
}

TEST(SimulateUntil, StopsAtFirstTourPastN) {
  const auto zoo = zoo::two_state_example(0.5);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomStream rng(seed);
    const auto out = simulate_until(zoo.model, zoo.f, 1, rng);
    ASSERT_GT(out.total_steps, 1u);
    ASSERT_LE(out.total_steps - out.tours.back().tau, 1u);
    ASSERT_EQ(out.tour_count, out.tours.size());
    if (out.tours.front().tau == 2) {
      ASSERT_EQ(out.tour_count, 1u);
      ASSERT_EQ(out.total_steps, 2u);
    }
  }
}

TEST(SimulateUntil, ExpectedLengthAndWald) {
  const auto zoo = zoo::two_state_example(0.5);
  std::vector<double> total;
  std::vector<double> count;
  std::vector<double> wald_gap;  // T - m R, mean zero by Wald's first identity
  for (std::uint64_t rep = 0; rep < 10000; ++rep) {
    RandomStream rng(5, rep, StreamRole::Tours);
    const auto out = simulate_until(zoo.model, zoo.f, 1000, rng);
    total.push_back(static_cast<double>(out.total_steps));
    count.push_back(static_cast<double>(out.tour_count));
    wald_gap.push_back(static_cast<double>(out.total_steps) - 2.0 * static_cast<double>(out.tour_count));
  }
  const auto t = stats::mean_se(total);
  EXPECT_LE(t.mean, 1003.0 + 3 * t.se);
  const auto g = stats::mean_se(wald_gap);
  EXPECT_NEAR(g.mean, 0.0, 3 * g.se);
}

TEST(SimulatePath, ToursMatchStreamAndFixedAverage) {
  const auto zoo = zoo::independence_mh(zoo::default_imh_target(),
                                        std::vector<double>(10, 0.1));
  RandomStream rng(41);
  const SplitPath path = simulate_path(zoo.model, 5000, rng);
  const auto tours = tours_from_path(path, zoo.f);
  ASSERT_FALSE(tours.empty());
  std::uint64_t span = 0;
  for (const auto& t : tours) span += t.tau;
  const auto reg = estimate_reg(tours);
  const auto fixed = estimate_fixed(path.states, zoo.f, 0, span);
  EXPECT_NEAR(reg.value, fixed.value, 1e-14);
  EXPECT_EQ(reg.samples_used, fixed.samples_used);

  // The same stream cut on the fly produces identical tours.
  RandomStream again(41);
  const auto streamed = simulate_tours(zoo.model, zoo.f, tours.size(), again);
  for (std::size_t k = 0; k < tours.size(); ++k) {
    ASSERT_EQ(streamed[k].tau, tours[k].tau);
    ASSERT_EQ(streamed[k].last_state, tours[k].last_state);
  }
}

TEST(SimulateTrajectory, StartsFromInitialLaw) {
  const auto zoo = zoo::drift_chain(10, 0.3, 1.3);
  RandomStream rng(42);
  std::vector<double> start(10, 0.0);
  start[4] = 1.0;
  const auto traj = simulate_trajectory(zoo.model.kernel(), start, 100, rng);
  ASSERT_EQ(traj.size(), 100u);
  EXPECT_EQ(traj[0], 4u);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    EXPECT_GT(zoo.model.kernel()(traj[i - 1], traj[i]), 0.0);
  }
}

TEST(ModeEquivalence, KolmogorovSmirnovOnZoo) {
  for (const auto& zoo : zoo::all_models()) {
    RandomStream a(51, 0, StreamRole::Verify);
    RandomStream b(51, 1, StreamRole::Verify);
    const auto ex = simulate_tours(zoo.model, zoo.f, 20000, a, {SimulationMode::ExplicitSplit});
    const auto my = simulate_tours(zoo.model, zoo.f, 20000, b, {SimulationMode::MyklandRetrospective});
    std::vector<double> tau_a, tau_b, xi_a, xi_b;
    for (const auto& t : ex) {
      tau_a.push_back(static_cast<double>(t.tau));
      xi_a.push_back(t.xi_f);
    }
    for (const auto& t : my) {
      tau_b.push_back(static_cast<double>(t.tau));
      xi_b.push_back(t.xi_f);
    }
    EXPECT_GT(stats::ks_two_sample(tau_a, tau_b).p_value, 0.001) << zoo.name;
    EXPECT_GT(stats::ks_two_sample(xi_a, xi_b).p_value, 0.001) << zoo.name;
  }
}

TEST(ModeEquivalence, ResidualFaultIsDetected) {
  const auto zoo = zoo::independence_mh(zoo::default_imh_target(),
                                        std::vector<double>(10, 0.1));
  const SplitModel faulty = zoo.model.with_residual_fault(0.3);
  RandomStream a(52);
  RandomStream b(53);
  const auto ex = simulate_tours(faulty, zoo.f, 20000, a, {SimulationMode::ExplicitSplit});
  const auto my = simulate_tours(faulty, zoo.f, 20000, b, {SimulationMode::MyklandRetrospective});
  std::vector<double> xa, xb;
  for (const auto& t : ex) xa.push_back(t.xi_f);
  for (const auto& t : my) xb.push_back(t.xi_f);
  EXPECT_LT(stats::ks_two_sample(xa, xb).p_value, 0.001);
}

TEST(GeometricTours, ChiSquareOnWholeSpaceSmallSet) {
  const double beta = 0.3;
  const auto zoo = zoo::two_state_example(beta);
  RandomStream rng(61);
  const auto tours = simulate_tours(zoo.model, zoo.f, 100000, rng);
  // Cells tau = 1..15 and a tail cell.
  std::vector<std::uint64_t> counts(16, 0);
  std::vector<double> probs(16, 0.0);
  for (const auto& t : tours) ++counts[std::min<std::uint64_t>(t.tau, 16) - 1];
  double tail = 1.0;
  for (int k = 1; k <= 15; ++k) {
    probs[k - 1] = std::pow(1 - beta, k - 1) * beta;
    tail -= probs[k - 1];
  }
  probs[15] = tail;
  EXPECT_GT(stats::chi_square_gof(counts, probs).p_value, 0.001);
}
