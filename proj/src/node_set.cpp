#include "dsep/node_set.hpp"

namespace dsep {

NodeSet::NodeSet(std::size_t universe, std::initializer_list<Node> members)
    : NodeSet(universe, std::span<const Node>(members.begin(), members.size())) {}

NodeSet::NodeSet(std::size_t universe, std::span<const Node> members) : NodeSet(universe) {
  for (Node v : members) insert(v);
}

NodeSet NodeSet::all(std::size_t universe) {
  NodeSet s(universe);
  for (std::size_t v = 0; v < universe; ++v) s.insert(static_cast<Node>(v));
  return s;
}

std::size_t NodeSet::size() const noexcept {
  std::size_t count = 0;
  for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

bool NodeSet::empty() const noexcept {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

bool NodeSet::intersects(const NodeSet& other) const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & other.words_[w]) != 0) return true;
  return false;
}

bool NodeSet::is_subset_of(const NodeSet& other) const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  return true;
}

NodeSet& NodeSet::operator|=(const NodeSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

NodeSet& NodeSet::operator-=(const NodeSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
  return *this;
}

std::vector<Node> NodeSet::members() const {
  std::vector<Node> out;
  out.reserve(size());
  for_each([&](Node v) { out.push_back(v); });
  return out;
}

std::string NodeSet::to_string() const {
  std::string out;
  for_each([&](Node v) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  });
  return out;
}

}  // namespace dsep
