#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regen/chain.hpp"
#include "regen/estimators.hpp"

namespace regen {

struct PerfectDraws {
  std::vector<std::size_t> states;  // X_{T_k - 1}, k = 1..r
  std::uint64_t steps = 0;          // chain steps consumed
};

// Pre-regeneration states of the first r tours. Requires a Doeblin model (J = X);
// throws NotDoeblin otherwise.
PerfectDraws perfect_samples(const SplitModel& model, std::uint64_t r, RandomStream& rng,
                             SimulationOptions options = {});

// Sample mean of f over the draws. When sigma_sq (stationary variance) is given the
// report carries the exact MSE sigma^2 / r.
EstimateReport estimate_perfect(const PerfectDraws& draws, std::span<const double> f,
                                std::optional<double> sigma_sq = std::nullopt);

}  // namespace regen
