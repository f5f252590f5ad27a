#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsep/node_set.hpp"

namespace dsep {

// Visits every size-k subset of `pool` in lexicographic order of pool
// positions, passing the chosen nodes. Stops early when `visit` returns true;
// the return value says whether that happened.
template <class Visit>
bool for_each_combination(std::span<const Node> pool, std::size_t k, Visit&& visit) {
  const std::size_t m = pool.size();
  if (k > m) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t t = 0; t < k; ++t) idx[t] = t;
  std::vector<Node> chosen(k);
  while (true) {
    for (std::size_t t = 0; t < k; ++t) chosen[t] = pool[idx[t]];
    if (visit(std::span<const Node>(chosen))) return true;
    std::size_t t = k;
    while (t > 0 && idx[t - 1] == m - k + (t - 1)) --t;
    if (t == 0) return false;
    ++idx[t - 1];
    for (std::size_t u = t; u < k; ++u) idx[u] = idx[u - 1] + 1;
  }
}

// C(n, k) as a double; exact while it fits in 53 bits.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (std::size_t t = 1; t <= k; ++t) r = r * static_cast<double>(n - k + t) / static_cast<double>(t);
  return r;
}

}  // namespace dsep
