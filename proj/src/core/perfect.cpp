#include "regen/perfect.hpp"

#include "regen/error.hpp"

namespace regen {

PerfectDraws perfect_samples(const SplitModel& model, std::uint64_t r, RandomStream& rng,
                             SimulationOptions options) {
  if (!model.is_doeblin()) {
    fail(ErrorCode::NotDoeblin,
         "pre-regeneration states are draws from pi only when the small set is the whole space");
  }
  if (r < 1) fail(ErrorCode::DomainError, "r must be positive");
  // The block sums are not needed; a zero function keeps TourStream's bookkeeping uniform.
  const std::vector<double> zero(model.states(), 0.0);
  TourStream stream(model, zero, rng, options);
  PerfectDraws draws;
  draws.states.reserve(r);
  for (std::uint64_t k = 0; k < r; ++k) draws.states.push_back(stream.next().last_state);
  draws.steps = stream.steps();
  return draws;
}

EstimateReport estimate_perfect(const PerfectDraws& draws, std::span<const double> f,
                                std::optional<double> sigma_sq) {
  if (draws.states.empty()) fail(ErrorCode::EmptySampleList, "no perfect samples");
  double sum = 0.0;
  for (std::size_t x : draws.states) {
    if (x >= f.size()) fail(ErrorCode::DomainError, "sample outside the function domain");
    sum += f[x];
  }
  const auto r = static_cast<double>(draws.states.size());
  EstimateReport report{EstimatorKind::Perfect, sum / r, draws.states.size(),
                        std::max<std::uint64_t>(draws.steps, draws.states.size()), std::nullopt};
  if (sigma_sq) report.mse_bound = *sigma_sq / r;
  return report;
}

}  // namespace regen
