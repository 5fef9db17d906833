#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace regen {

/// Tour moments of a split chain for a given f. All variances are per unit of expected
/// tour length (divided by m).
struct TourMoments {
  double m = 0.0;             // E tau
  double sigma_tau_sq = 0.0;  // Var tau / m
  double sigma_as_sq = 0.0;   // E Xi(f - theta)^2 / m
  double sigma_unb_sq = 0.0;  // Var Xi(f) / m
  double rho_f1 = 0.0;        // Cov(Xi(f - theta), tau) / m
  double C0 = 0.0;            // sigma_tau_sq + m
  double theta = 0.0;         // pi f
  double tau_second_moment = 0.0;  // E tau^2
};

struct DoeblinMoments {
  double m;
  double sigma_tau_sq;
  double C0;
};

struct DriftParams {
  double lambda;
  double K;
  double beta;
  double pi_V;
  double pi_sqrtV;
  double f_norm;  // sup |f - theta| / V^{1/2}
};

struct DriftBounds {
  double sigma_as_bound;
  double C0_bound;
  double sigma_tau_bound;
  // sqrt(K) - sqrt(lambda) - beta(2 - sqrt(lambda)) < 0: the parameters are inconsistent.
  bool negative_component;
};

struct UnbiasedBounds {
  double mse;
  double tail;
};

struct RegSeqBounds {
  double mse;
  double tail;
  double expected_T;
};

struct DoeblinVarianceBound {
  double value;  // tightest stated form
  double loose;  // 4 sigma^2 / beta (general) or 2 sigma^2 / beta (reversible)
};

// Chebyshev split of the ratio-estimator tail, valid for every 0 < delta < 1:
// (1/(r m)) [sigma_as^2 / (eps^2 (1 - delta)^2) + sigma_tau^2 / (m delta^2)].
double reg_tail_bound(std::uint64_t r, double m, double sigma_as_sq, double sigma_tau_sq,
                      double eps, double delta);

// Exact minimizer of reg_tail_bound over delta:
//   (sigma_tau^2 / m)^{1/3} / ((sigma_as^2 / eps^2)^{1/3} + (sigma_tau^2 / m)^{1/3}).
// With m = 1 this is sigma_tau^{2/3} / (sigma_as^{2/3} eps^{-2/3} + sigma_tau^{2/3}).
double optimal_delta(double sigma_as_sq, double sigma_tau_sq, double eps, double m = 1.0);

// reg_tail_bound at optimal_delta; for sigma_tau = 0 the delta -> 0 limit.
double reg_tail_bound_optimal(std::uint64_t r, double m, double sigma_as_sq, double sigma_tau_sq,
                              double eps);

UnbiasedBounds unbiased_bounds(std::uint64_t r, double m, double sigma_unb_sq, double eps);
RegSeqBounds regseq_bounds(std::uint64_t n, double sigma_as_sq, double C0, double eps);

DoeblinMoments doeblin_moments(double beta);
DoeblinVarianceBound doeblin_variance_bound(double sigma_sq, double beta, bool reversible);

void validate(const DriftParams& p);
DriftBounds drift_bounds(const DriftParams& p);

double m_lower_bound(double beta);

// Single-run exponential inequality for uniformly ergodic chains:
// 2 exp(-((n-1)/2) (2 beta eps / |f|_inf - 3/(n-1))^2); 2 when the bracket is <= 0.
double klm_exponential_tail(std::uint64_t n, double f_sup, double beta, double eps);
// Smallest n with klm_exponential_tail(n) <= alpha.
std::uint64_t klm_sample_size(double f_sup, double beta, double eps, double alpha);
// Leading-order n ~ |f|^2 / (2 beta^2 eps^2) log(2/alpha).
double klm_asymptotic_size(double f_sup, double beta, double eps, double alpha);

// Standard normal quantile: Acklam's rational approximation refined by one Halley step
// against erfc; absolute error below 1e-12 on (0, 1).
double normal_quantile(double p);
// (sigma_as^2 / eps^2) [Phi^{-1}(1 - alpha/2)]^2.
double clt_sample_size(double sigma_as_sq, double eps, double alpha);

/// One evaluated bound plus the inputs it was evaluated at.
struct BoundReport {
  std::string name;
  double value = 0.0;
  double capped = 0.0;  // min(value, 1) for probabilities; equal to value otherwise
  bool probability = false;
  std::string source;  // which inequality produced the value
  std::vector<std::pair<std::string, double>> inputs;
};

BoundReport make_report(std::string name, double value, bool probability, std::string source,
                        std::vector<std::pair<std::string, double>> inputs);

}  // namespace regen
