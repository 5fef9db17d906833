#include "regen/median_trick.hpp"

#include <algorithm>
#include <cmath>

#include "regen/bounds.hpp"
#include "regen/error.hpp"
#include "regen/parallel.hpp"

namespace regen {

namespace {

void check_level(double a) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::DomainError, "a must lie in (0, 1)");
}

}  // namespace

double median_c1(double a) {
  check_level(a);
  return 1.0 / a;
}

double median_c2(double a) {
  check_level(a);
  return 2.0 / -std::log(4.0 * a * (1.0 - a));
}

double chernoff_failure(double a, std::uint64_t l) {
  check_level(a);
  if (l == 0 || l % 2 == 0) fail(ErrorCode::DomainError, "l must be a positive odd integer");
  return 0.5 * std::pow(4.0 * a * (1.0 - a), static_cast<double>(l) / 2.0);
}

std::uint64_t smallest_odd_replicates(double a, double alpha) {
  check_level(a);
  if (!(alpha > 0.0 && alpha < 0.5)) fail(ErrorCode::DomainError, "alpha must lie in (0, 1/2)");
  if (a >= 0.5) fail(ErrorCode::DomainError, "the median trick needs a < 1/2");
  std::uint64_t l = 1;
  while (chernoff_failure(a, l) > alpha) l += 2;
  return l;
}

Plan make_plan(double sigma_as_bound, double C0_bound, double eps, double alpha, double a_star) {
  if (!(std::isfinite(sigma_as_bound) && sigma_as_bound >= 0.0)) {
    fail(ErrorCode::DomainError, "sigma_as bound must be >= 0");
  }
  if (!(std::isfinite(C0_bound) && C0_bound >= 0.0)) fail(ErrorCode::DomainError, "C0 bound must be >= 0");
  if (!(std::isfinite(eps) && eps > 0.0)) fail(ErrorCode::DomainError, "eps must be positive");
  const double c1 = median_c1(a_star);
  const double c2 = median_c2(a_star);

  Plan plan;
  plan.l = smallest_odd_replicates(a_star, alpha);
  const double n_min = c1 * sigma_as_bound / (eps * eps) + C0_bound;
  plan.n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(n_min)));
  plan.a_star = a_star;
  plan.expected_cost = static_cast<double>(plan.l) * (static_cast<double>(plan.n) + C0_bound);
  plan.l_asymptotic = c2 * std::log(1.0 / (2.0 * alpha));
  plan.asymptotic_cost = c1 * sigma_as_bound / (eps * eps) * plan.l_asymptotic;
  plan.target_eps = eps;
  plan.target_alpha = alpha;
  plan.sigma_as_bound = sigma_as_bound;
  plan.C0_bound = C0_bound;
  return plan;
}

double median_of(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::DomainError, "median of an empty set");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

MedianResult run_median(const Plan& plan, const SplitModel& model, std::span<const double> f,
                        std::uint64_t master_seed, SimulationOptions options, unsigned jobs) {
  if (plan.l == 0 || plan.l % 2 == 0 || plan.n == 0) fail(ErrorCode::DomainError, "invalid plan");
  check_function(model.kernel(), f);
  MedianResult result;
  result.runs.resize(plan.l);
  parallel_for(plan.l, jobs, [&](std::uint64_t j) {
    RandomStream rng(master_seed, j, StreamRole::Tours);
    const StoppedTours stopped = simulate_until(model, f, plan.n, rng, options);
    result.runs[j] = estimate_reg_seq(stopped.tours, plan.n);
  });
  std::vector<double> values;
  values.reserve(plan.l);
  for (const auto& run : result.runs) {
    values.push_back(run.value);
    result.total_steps += run.samples_used;
  }
  result.median = median_of(values);
  return result;
}

CostComparison compare_costs(double beta, double sigma_sq, double f_sup, double eps, double alpha,
                             double a_star) {
  const DoeblinMoments dm = doeblin_moments(beta);
  CostComparison out;
  out.beta = beta;
  out.sigma_sq = sigma_sq;
  out.f_sup = f_sup;
  out.general = make_plan(doeblin_variance_bound(sigma_sq, beta, false).loose, dm.C0, eps, alpha, a_star);
  out.reversible = make_plan(doeblin_variance_bound(sigma_sq, beta, true).value, dm.C0, eps, alpha, a_star);
  out.perfect_r = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(median_c1(a_star) * sigma_sq / (eps * eps))));
  out.perfect_cost = static_cast<double>(out.general.l) * static_cast<double>(out.perfect_r) / beta;
  out.klm_n = klm_sample_size(f_sup, beta, eps, alpha);
  out.ratio_general = out.general.expected_cost / static_cast<double>(out.klm_n);
  out.ratio_reversible = out.reversible.expected_cost / static_cast<double>(out.klm_n);
  return out;
}

}  // namespace regen
