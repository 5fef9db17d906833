#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "regen/chain.hpp"

namespace regen {

enum class EstimatorKind { Fixed, Reg, Unbiased, RegSeq, Perfect };

const char* estimator_name(EstimatorKind kind) noexcept;
std::optional<EstimatorKind> parse_estimator(std::string_view name) noexcept;

struct EstimateReport {
  // Every estimator here targets theta = pi f.
  static constexpr std::string_view target = "pi(f)";

  EstimatorKind kind = EstimatorKind::Fixed;
  double value = 0.0;
  std::uint64_t tours_used = 0;
  std::uint64_t samples_used = 0;  // chain steps consumed
  std::optional<double> mse_bound;
};

// (1/n) sum_{i=t}^{t+n-1} f(X_i).
EstimateReport estimate_fixed(std::span<const std::size_t> trajectory, std::span<const double> f,
                              std::uint64_t t, std::uint64_t n);

// Ratio estimator over a fixed number of tours.
EstimateReport estimate_reg(std::span<const Tour> tours);

// (1/(r m)) sum Xi_k(f); needs the exact mean tour length m.
EstimateReport estimate_unbiased(std::span<const Tour> tours, double m);

// Ratio estimator over the tours of simulate_until(n). The stopping rule
// (sum tau > n, sum tau - last tau <= n) is verified.
EstimateReport estimate_reg_seq(std::span<const Tour> tours, std::uint64_t n);

}  // namespace regen
