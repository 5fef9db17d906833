#include "regen/estimators.hpp"

#include <string>

#include "regen/error.hpp"

namespace regen {

const char* estimator_name(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Fixed: return "fixed";
    case EstimatorKind::Reg: return "reg";
    case EstimatorKind::Unbiased: return "unbiased";
    case EstimatorKind::RegSeq: return "reg-seq";
    case EstimatorKind::Perfect: return "perfect";
  }
  return "unknown";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) noexcept {
  for (auto kind : {EstimatorKind::Fixed, EstimatorKind::Reg, EstimatorKind::Unbiased,
                    EstimatorKind::RegSeq, EstimatorKind::Perfect}) {
    if (name == estimator_name(kind)) return kind;
  }
  return std::nullopt;
}

namespace {

struct TourTotals {
  double xi = 0.0;
  std::uint64_t tau = 0;
};

TourTotals totals(std::span<const Tour> tours) {
  TourTotals t;
  for (const Tour& tour : tours) {
    t.xi += tour.xi_f;
    t.tau += tour.tau;
  }
  return t;
}

}  // namespace

EstimateReport estimate_fixed(std::span<const std::size_t> trajectory, std::span<const double> f,
                              std::uint64_t t, std::uint64_t n) {
  if (n < 1) fail(ErrorCode::DomainError, "n must be positive");
  if (trajectory.size() < t + n) {
    fail(ErrorCode::InsufficientTrajectory,
         "trajectory has " + std::to_string(trajectory.size()) + " states, need t + n = " +
             std::to_string(t + n));
  }
  double sum = 0.0;
  for (std::uint64_t i = t; i < t + n; ++i) {
    const std::size_t x = trajectory[i];
    if (x >= f.size()) fail(ErrorCode::DomainError, "trajectory state outside the function domain");
    sum += f[x];
  }
  return {EstimatorKind::Fixed, sum / static_cast<double>(n), 0, n, std::nullopt};
}

EstimateReport estimate_reg(std::span<const Tour> tours) {
  if (tours.empty()) fail(ErrorCode::EmptyTourList, "ratio estimator needs at least one tour");
  const TourTotals t = totals(tours);
  return {EstimatorKind::Reg, t.xi / static_cast<double>(t.tau), tours.size(), t.tau, std::nullopt};
}

EstimateReport estimate_unbiased(std::span<const Tour> tours, double m) {
  if (!(m > 0.0)) fail(ErrorCode::NonpositiveM, "mean tour length m must be positive");
  if (tours.empty()) fail(ErrorCode::EmptyTourList, "unbiased estimator needs at least one tour");
  const TourTotals t = totals(tours);
  const double value = t.xi / (static_cast<double>(tours.size()) * m);
  return {EstimatorKind::Unbiased, value, tours.size(), t.tau, std::nullopt};
}

EstimateReport estimate_reg_seq(std::span<const Tour> tours, std::uint64_t n) {
  if (n < 1) fail(ErrorCode::DomainError, "n must be positive");
  if (tours.empty()) fail(ErrorCode::StoppingRuleViolated, "no tours for the sequential estimator");
  const TourTotals t = totals(tours);
  if (t.tau <= n || t.tau - tours.back().tau > n) {
    fail(ErrorCode::StoppingRuleViolated,
         "tours do not end at the first regeneration after n = " + std::to_string(n) +
             " (total length " + std::to_string(t.tau) + ")");
  }
  return {EstimatorKind::RegSeq, t.xi / static_cast<double>(t.tau), tours.size(), t.tau,
          std::nullopt};
}

}  // namespace regen
