#include "dsep/subset_stream.hpp"

#include "dsep/error.hpp"
#include "dsep/rng.hpp"

namespace dsep {

SubsetPermutation::SubsetPermutation(unsigned bits, std::uint64_t seed)
    : bits_(bits), size_(std::uint64_t{1} << bits), rng_(seed) {
  if (bits > kMaxBits) throw DomainError("bits", "subset stream limited to 62 bits");
  if (bits_ > kExactShuffleMaxBits) {
    half_bits_ = (bits_ + 1) / 2;
    for (std::size_t r = 0; r < round_keys_.size(); ++r) round_keys_[r] = split_seed(seed, 0xfe15, r);
  }
}

std::uint64_t SubsetPermutation::feistel(std::uint64_t x) const noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << half_bits_) - 1;
  std::uint64_t left = x >> half_bits_;
  std::uint64_t right = x & mask;
  for (auto key : round_keys_) {
    const std::uint64_t next = left ^ (mix64(right ^ key) & mask);
    left = right;
    right = next;
  }
  return (left << half_bits_) | right;
}

std::optional<std::uint64_t> SubsetPermutation::next() {
  if (emitted_ == size_) return std::nullopt;
  const std::uint64_t t = emitted_++;

  if (bits_ > kExactShuffleMaxBits) {
    std::uint64_t v = feistel(t);
    while (v >= size_) v = feistel(v);
    return v;
  }

  // Draw a uniform slot in [t, size) and swap it with slot t.
  const std::uint64_t r = t + rng_.below(size_ - t);

  auto value_at = [&](std::uint64_t slot) {
    auto it = displaced_.find(slot);
    return it == displaced_.end() ? slot : it->second;
  };
  const std::uint64_t chosen = value_at(r);
  if (r != t) displaced_[r] = value_at(t);
  displaced_.erase(t);
  return chosen;
}

}  // namespace dsep
