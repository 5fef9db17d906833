#pragma once

#include <span>

#include "regen/bounds.hpp"
#include "regen/chain.hpp"

namespace regen::oracle {

inline constexpr std::size_t kMaxStates = 2000;

bool is_irreducible(const FiniteKernel& kernel);
// Period of an irreducible kernel (gcd of cycle lengths through BFS levels).
std::size_t period(const FiniteKernel& kernel);

// pi P = pi, sum pi = 1, from a dense solve with the normalization row.
Vector stationary(const FiniteKernel& kernel);

double stationary_mean(const FiniteKernel& kernel, std::span<const double> f);
double stationary_variance(const FiniteKernel& kernel, std::span<const double> f);

// Poisson-equation route: g = (I - P + 1 pi)^{-1} fbar, sigma_as^2 = pi(2 fbar g - fbar^2).
double asymptotic_variance_exact(const FiniteKernel& kernel, std::span<const double> f);

// Tour-moment route: first-step linear systems on the pre-regeneration operator
// P - beta 1_J nu^T. Does not use the stationary distribution.
TourMoments tour_moments_exact(const SplitModel& model, std::span<const double> f);

// E_pi g(X_0)^2 + 2 sum_{i>=1} E_pi g(X_0) g(X_i) I(tau > i), for g >= 0, through
// (pi o g)^T ((I - Qt)^{-1} - I) g. Equals E Xi(g)^2 / m.
double square_block_series(const SplitModel& model, std::span<const double> g);
// E Xi(g)^2 / m directly from the tour second-moment system.
double square_block_direct(const SplitModel& model, std::span<const double> g);

struct DriftInputs {
  double pi_V;
  double pi_sqrtV;
  double lambda_hat;  // max_{x not in J} PV(x) / V(x); 0 when J = X
  double K_hat;       // max_{x in J} PV(x)
  bool satisfies_drift() const noexcept { return lambda_hat < 1.0; }
};

DriftInputs drift_inputs_exact(const SplitModel& model, std::span<const double> V);

// sup_x |f(x) - pi f| / sqrt(V(x)).
double v_half_norm(const FiniteKernel& kernel, std::span<const double> f,
                   std::span<const double> V);

}  // namespace regen::oracle
