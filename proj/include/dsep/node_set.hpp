#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dsep {

using Node = int;

// Fixed-universe bitset over nodes 0..universe-1.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}
  NodeSet(std::size_t universe, std::initializer_list<Node> members);
  NodeSet(std::size_t universe, std::span<const Node> members);

  static NodeSet all(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }

  bool contains(Node v) const noexcept {
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1U;
  }
  void insert(Node v) noexcept { words_[static_cast<std::size_t>(v) >> 6] |= bit(v); }
  void erase(Node v) noexcept { words_[static_cast<std::size_t>(v) >> 6] &= ~bit(v); }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  std::size_t size() const noexcept;
  bool empty() const noexcept;
  bool intersects(const NodeSet& other) const noexcept;
  bool is_subset_of(const NodeSet& other) const noexcept;

  NodeSet& operator|=(const NodeSet& other) noexcept;
  NodeSet& operator&=(const NodeSet& other) noexcept;
  // Set difference.
  NodeSet& operator-=(const NodeSet& other) noexcept;

  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }
  friend bool operator==(const NodeSet&, const NodeSet&) = default;

  // Members in ascending order.
  std::vector<Node> members() const;

  // Calls f(v) for each member in ascending order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        f(static_cast<Node>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
        bits &= bits - 1;
      }
    }
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  // Sorted space-separated indices, e.g. "1 4 7"; empty string for the empty set.
  std::string to_string() const;

 private:
  static std::uint64_t bit(Node v) noexcept { return std::uint64_t{1} << (v & 63); }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

using ConditioningSet = NodeSet;

}  // namespace dsep
