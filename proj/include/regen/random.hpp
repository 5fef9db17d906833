#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace regen {

// Role tags separate the streams a single replicate may consume.
enum class StreamRole : std::uint64_t {
  Tours = 1,
  Trajectory = 2,
  Perfect = 3,
  Median = 4,
  Verify = 5,
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Derives the 64-bit key of stream (master_seed, replicate, role). Pure function of its inputs.
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t replicate, StreamRole role) noexcept;

/// xoshiro256** seeded through splitmix64 from a stream key.
///
/// Everything derived from it (uniforms, Bernoulli draws, alias sampling) uses only
/// integer arithmetic and IEEE double ops, so streams are bit-identical across hosts.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) noexcept;
  RandomStream(std::uint64_t master_seed, std::uint64_t replicate, StreamRole role) noexcept
      : RandomStream(stream_key(master_seed, replicate, role)) {}

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) noexcept { return uniform() < p; }
  // Uniform integer on [0, n), Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t s_[4];
};

/// Walker/Vose alias table over the support of a probability vector. Zero-probability
/// outcomes are never returned.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> probabilities);

  std::size_t sample(RandomStream& rng) const noexcept {
    const std::uint64_t slot = rng.below(prob_.size());
    const std::size_t cell = rng.uniform() < prob_[slot] ? slot : alias_[slot];
    return outcome_[cell];
  }

  bool empty() const noexcept { return prob_.empty(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<std::uint32_t> outcome_;
};

}  // namespace regen
