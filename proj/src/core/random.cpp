#include "regen/random.hpp"

#include <bit>

#include "regen/error.hpp"

namespace regen {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t replicate,
                         StreamRole role) noexcept {
  std::uint64_t state = master_seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (replicate * 0xD1342543DE82EF95ULL);
  key = splitmix64(state);
  state = key ^ (static_cast<std::uint64_t>(role) * 0xAF251AF3B0F025B5ULL);
  return splitmix64(state);
}

RandomStream::RandomStream(std::uint64_t key) noexcept : key_(key) {
  std::uint64_t state = key;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t RandomStream::next_u64() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t RandomStream::below(std::uint64_t n) noexcept {
  __uint128_t product = static_cast<__uint128_t>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(product);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      product = static_cast<__uint128_t>(next_u64()) * n;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

AliasTable::AliasTable(std::span<const double> probabilities) {
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > 0.0) {
      outcome_.push_back(static_cast<std::uint32_t>(i));
      total += probabilities[i];
    }
  }
  if (outcome_.empty()) fail(ErrorCode::DomainError, "alias table needs positive mass");

  const std::size_t k = outcome_.size();
  std::vector<double> scaled(k);
  for (std::size_t j = 0; j < k; ++j) {
    scaled[j] = probabilities[outcome_[j]] * static_cast<double>(k) / total;
  }
  prob_.assign(k, 1.0);
  alias_.resize(k);
  for (std::size_t j = 0; j < k; ++j) alias_[j] = static_cast<std::uint32_t>(j);

  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t j = 0; j < k; ++j) {
    (scaled[j] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(j));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t g = large.back();
    prob_[s] = scaled[s];
    alias_[s] = g;
    scaled[g] = (scaled[g] + scaled[s]) - 1.0;
    if (scaled[g] < 1.0) {
      large.pop_back();
      small.push_back(g);
    }
  }
  // Leftovers are 1 up to rounding; every cell is a positive-mass outcome.
  for (std::uint32_t j : small) prob_[j] = 1.0;
  for (std::uint32_t j : large) prob_[j] = 1.0;
}

}  // namespace regen
