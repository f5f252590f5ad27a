#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "dsep/rng.hpp"

namespace dsep {

// A seeded stream over 0..2^bits-1 that visits every value exactly once.
//
// Up to kExactShuffleMaxBits the order is a uniformly random permutation
// (Fisher-Yates run lazily, so memory grows with the number of draws, not
// with 2^bits). Beyond that the order is a keyed Feistel permutation on the
// next even bit width, cycle-walked back into range, using O(1) memory.
class SubsetPermutation {
 public:
  static constexpr unsigned kExactShuffleMaxBits = 24;
  static constexpr unsigned kMaxBits = 62;

  SubsetPermutation(unsigned bits, std::uint64_t seed);

  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t emitted() const noexcept { return emitted_; }

  std::optional<std::uint64_t> next();

 private:
  std::uint64_t feistel(std::uint64_t x) const noexcept;

  unsigned bits_;
  std::uint64_t size_;
  std::uint64_t emitted_ = 0;
  Rng rng_;
  // Lazy Fisher-Yates: slots that differ from the identity.
  std::unordered_map<std::uint64_t, std::uint64_t> displaced_;
  unsigned half_bits_ = 0;
  std::array<std::uint64_t, 8> round_keys_{};
};

}  // namespace dsep
