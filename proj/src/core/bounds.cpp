#include "regen/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "regen/error.hpp"

namespace regen {

namespace {

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::DomainError, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double reg_tail_bound(std::uint64_t r, double m, double sigma_as_sq, double sigma_tau_sq,
                      double eps, double delta) {
  require(r >= 1, "r must be positive");
  require(finite_pos(m), "m must be positive");
  require(finite_nonneg(sigma_as_sq) && finite_nonneg(sigma_tau_sq), "variances must be >= 0");
  require(finite_pos(eps), "eps must be positive");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const double rm = static_cast<double>(r) * m;
  const double one_minus = 1.0 - delta;
  return (sigma_as_sq / (eps * eps * one_minus * one_minus) + sigma_tau_sq / (m * delta * delta)) /
         rm;
}

double optimal_delta(double sigma_as_sq, double sigma_tau_sq, double eps, double m) {
  require(finite_nonneg(sigma_as_sq) && finite_nonneg(sigma_tau_sq), "variances must be >= 0");
  require(sigma_as_sq > 0.0 || sigma_tau_sq > 0.0, "both variances are zero");
  require(finite_pos(eps), "eps must be positive");
  require(finite_pos(m), "m must be positive");
  const double a = std::cbrt(sigma_as_sq / (eps * eps));
  const double b = std::cbrt(sigma_tau_sq / m);
  return b / (a + b);
}

double reg_tail_bound_optimal(std::uint64_t r, double m, double sigma_as_sq, double sigma_tau_sq,
                              double eps) {
  const double delta = optimal_delta(sigma_as_sq, sigma_tau_sq, eps, m);
  if (delta <= 0.0) {
    require(r >= 1, "r must be positive");
    return sigma_as_sq / (static_cast<double>(r) * m * eps * eps);
  }
  if (delta >= 1.0) {
    require(r >= 1, "r must be positive");
    return sigma_tau_sq / (static_cast<double>(r) * m * m);
  }
  return reg_tail_bound(r, m, sigma_as_sq, sigma_tau_sq, eps, delta);
}

UnbiasedBounds unbiased_bounds(std::uint64_t r, double m, double sigma_unb_sq, double eps) {
  require(r >= 1, "r must be positive");
  require(finite_pos(m), "m must be positive");
  require(finite_nonneg(sigma_unb_sq), "variance must be >= 0");
  require(finite_pos(eps), "eps must be positive");
  const double mse = sigma_unb_sq / (static_cast<double>(r) * m);
  return {mse, mse / (eps * eps)};
}

RegSeqBounds regseq_bounds(std::uint64_t n, double sigma_as_sq, double C0, double eps) {
  require(n >= 1, "n must be positive");
  require(finite_nonneg(sigma_as_sq), "variance must be >= 0");
  require(finite_nonneg(C0), "C0 must be >= 0");
  require(finite_pos(eps), "eps must be positive");
  const double nd = static_cast<double>(n);
  const double mse = sigma_as_sq / nd * (1.0 + C0 / nd);
  return {mse, mse / (eps * eps), nd + C0};
}

DoeblinMoments doeblin_moments(double beta) {
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  return {1.0 / beta, (1.0 - beta) / beta, 2.0 / beta - 1.0};
}

DoeblinVarianceBound doeblin_variance_bound(double sigma_sq, double beta, bool reversible) {
  require(finite_nonneg(sigma_sq), "sigma^2 must be >= 0");
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  if (reversible) return {(2.0 - beta) / beta * sigma_sq, 2.0 * sigma_sq / beta};
  const double s = std::sqrt(1.0 - beta);
  return {sigma_sq * (1.0 + 2.0 * s / (1.0 - s)), 4.0 * sigma_sq / beta};
}

void validate(const DriftParams& p) {
  require(p.lambda > 0.0 && p.lambda < 1.0, "lambda must lie in (0, 1)");
  require(std::isfinite(p.K) && p.K >= 1.0, "K must be >= 1");
  require(p.beta > 0.0 && p.beta <= 1.0, "beta must lie in (0, 1]");
  require(finite_pos(p.pi_V) && finite_pos(p.pi_sqrtV), "pi V and pi V^{1/2} must be positive");
  require(p.pi_sqrtV <= std::sqrt(p.pi_V) * (1.0 + 1e-12), "pi V^{1/2} exceeds sqrt(pi V)");
  require(finite_nonneg(p.f_norm), "f norm must be >= 0");
}

DriftBounds drift_bounds(const DriftParams& p) {
  validate(p);
  const double sl = std::sqrt(p.lambda);
  const double sk = std::sqrt(p.K);
  const double component = sk - sl - p.beta * (2.0 - sl);
  const double sigma_as =
      p.f_norm * p.f_norm *
      ((1.0 + sl) / (1.0 - sl) * p.pi_V + 2.0 * component / (p.beta * (1.0 - sl)) * p.pi_sqrtV);
  const double c0 = sl / (1.0 - sl) * p.pi_sqrtV + (sk - sl - p.beta) / (p.beta * (1.0 - sl)) - 1.0;
  return {sigma_as, c0, c0 - 1.0, component < 0.0};
}

double m_lower_bound(double beta) {
  require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
  return 1.0 / beta;
}

double klm_exponential_tail(std::uint64_t n, double f_sup, double beta, double eps) {
  require(n >= 2, "n must be >= 2");
  require(finite_pos(f_sup), "|f|_inf must be positive");
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  require(finite_pos(eps), "eps must be positive");
  const double k = static_cast<double>(n - 1);
  const double gap = 2.0 * beta * eps / f_sup - 3.0 / k;
  if (gap <= 0.0) return 2.0;
  return 2.0 * std::exp(-0.5 * k * gap * gap);
}

std::uint64_t klm_sample_size(double f_sup, double beta, double eps, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  auto ok = [&](std::uint64_t n) { return klm_exponential_tail(n, f_sup, beta, eps) <= alpha; };
  std::uint64_t lo = 2;  // invariant: !ok(lo)
  if (ok(lo)) return lo;
  std::uint64_t hi = 4;
  while (!ok(hi)) {
    lo = hi;
    require(hi < (1ULL << 62), "sample size overflow");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

double klm_asymptotic_size(double f_sup, double beta, double eps, double alpha) {
  require(finite_pos(f_sup) && finite_pos(eps), "|f|_inf and eps must be positive");
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  return f_sup * f_sup / (2.0 * beta * beta * eps * eps) * std::log(2.0 / alpha);
}

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "probability must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step on Phi(x) - p.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double clt_sample_size(double sigma_as_sq, double eps, double alpha) {
  require(finite_nonneg(sigma_as_sq), "variance must be >= 0");
  require(finite_pos(eps), "eps must be positive");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return sigma_as_sq / (eps * eps) * z * z;
}

BoundReport make_report(std::string name, double value, bool probability, std::string source,
                        std::vector<std::pair<std::string, double>> inputs) {
  BoundReport report;
  report.name = std::move(name);
  report.value = value;
  report.capped = probability ? std::min(value, 1.0) : value;
  report.probability = probability;
  report.source = std::move(source);
  report.inputs = std::move(inputs);
  return report;
}

}  // namespace regen
