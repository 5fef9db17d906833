#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regen/chain.hpp"
#include "regen/estimators.hpp"

namespace regen {

inline constexpr double kAStar = 0.11969;

// C1 = 1/a, C2 = 2 / ln[1/(4a(1-a))], both at full precision.
double median_c1(double a = kAStar);
double median_c2(double a = kAStar);

struct Plan {
  std::uint64_t n = 0;   // per-run budget
  std::uint64_t l = 0;   // odd replicate count
  double a_star = kAStar;
  double expected_cost = 0.0;      // l (n + C0)
  double asymptotic_cost = 0.0;    // C1 C2 sigma_as^2 / eps^2 ln(1/(2 alpha))
  double l_asymptotic = 0.0;       // C2 ln(1/(2 alpha))
  double target_eps = 0.0;
  double target_alpha = 0.0;
  double sigma_as_bound = 0.0;
  double C0_bound = 0.0;
};

// (1/2) [4a(1-a)]^{l/2}; l must be odd.
double chernoff_failure(double a, std::uint64_t l);
// Smallest odd l with chernoff_failure(a, l) <= alpha.
std::uint64_t smallest_odd_replicates(double a, double alpha);

Plan make_plan(double sigma_as_bound, double C0_bound, double eps, double alpha,
               double a_star = kAStar);

struct MedianResult {
  double median = 0.0;
  std::vector<EstimateReport> runs;  // ordered by replicate index
  std::uint64_t total_steps = 0;
};

double median_of(std::span<const double> values);

// l independent reg-seq runs of length n; run j uses stream (master_seed, j, Tours).
MedianResult run_median(const Plan& plan, const SplitModel& model, std::span<const double> f,
                        std::uint64_t master_seed, SimulationOptions options = {},
                        unsigned jobs = 1);

}  // namespace regen

namespace regen {

/// Planned total costs of the competing fixed-precision schemes on a Doeblin chain.
struct CostComparison {
  double beta = 0.0;
  double sigma_sq = 0.0;
  double f_sup = 0.0;
  Plan general;     // reg-seq + median, sigma_as^2 <= 4 sigma^2 / beta
  Plan reversible;  // reg-seq + median, sigma_as^2 <= (2 - beta) sigma^2 / beta
  std::uint64_t perfect_r = 0;
  double perfect_cost = 0.0;  // l r / beta
  std::uint64_t klm_n = 0;    // single run sized by the exponential inequality
  double ratio_general = 0.0;     // general.expected_cost / klm_n
  double ratio_reversible = 0.0;  // reversible.expected_cost / klm_n
};

CostComparison compare_costs(double beta, double sigma_sq, double f_sup, double eps, double alpha,
                             double a_star = kAStar);

}  // namespace regen
