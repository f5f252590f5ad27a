#include "dsep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dsep/error.hpp"

namespace dsep::bounds {

namespace {

void require_open_unit(double p, const char* field) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(field, "must lie in (0,1)");
}

void validate(const BoundInput& in) {
  if (in.n < 2) throw DomainError("n", "must be at least 2");
  require_open_unit(in.p1, "p1");
  if (in.j < 2 || in.j > in.n) throw DomainError("j", "must lie in 2..n");
}

double need_p2(const BoundInput& in) {
  if (!in.p2) throw DomainError("p2", "required");
  require_open_unit(*in.p2, "p2");
  return *in.p2;
}

// exponent * log(base) with 0 * log(anything) == 0.
double log_power(double base_log, double exponent) {
  return exponent == 0.0 ? 0.0 : exponent * base_log;
}

}  // namespace

double random_z(const BoundInput& in) {
  validate(in);
  const double p2 = need_p2(in);
  const double q = in.p1 * in.p1;
  const double colliders = static_cast<double>(in.n - in.j);
  const double noncolliders = static_cast<double>(in.j - 2);
  return std::exp(log_power(std::log1p(-p2 * q), colliders) +
                  log_power(std::log1p(-(1.0 - p2) * q), noncolliders));
}

double random_z_simple(const BoundInput& in) {
  validate(in);
  const double p2 = need_p2(in);
  const double q = in.p1 * in.p1;
  const double worst = std::max(p2, 1.0 - p2);
  return std::exp(log_power(std::log1p(-(1.0 - worst) * q), static_cast<double>(in.n - 2)));
}

double random_z_unconditional(const BoundInput& in) { return (1.0 - in.p1) * random_z(in); }

BoundedSize bounded_size(const BoundInput& in) {
  validate(in);
  const double q = in.p1 * in.p1;
  const double m = static_cast<double>(in.j - 2);
  return {0.5 * q * m, std::exp(-0.25 * q * m / 2.0)};
}

double bounded_size_unconditional(const BoundInput& in) {
  return (1.0 - in.p1) * bounded_size(in).probability;
}

double fixed_size(const BoundInput& in) {
  validate(in);
  if (!in.alpha) throw DomainError("alpha", "required");
  const std::size_t alpha = *in.alpha;
  if (alpha > in.n - 2) throw DomainError("alpha", "must lie in 0..n-2");
  const double q = in.p1 * in.p1;
  const double fraction =
      in.n == 2 ? 0.0 : static_cast<double>(alpha) / static_cast<double>(in.n - 2);
  const double colliders = static_cast<double>(in.n - in.j);
  const double tail = static_cast<double>(in.j) - static_cast<double>(alpha) - 2.0;
  return std::exp(log_power(std::log1p(-q * (2.0 - q) * fraction), colliders) +
                  log_power(std::log1p(-q), tail));
}

namespace {

struct SparseCount {
  std::uint64_t pairs;
  std::uint64_t cutoff;
};

SparseCount sparse_cutoff(std::size_t n, double d) {
  if (n < 2) throw DomainError("n", "must be at least 2");
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError("d", "must lie in [0,1]");
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  // The tolerance absorbs representation error in d, e.g. (2/n) * C(n,2).
  const auto cutoff = std::min<std::uint64_t>(
      pairs, static_cast<std::uint64_t>(std::floor(d * static_cast<double>(pairs) + 1e-9)));
  return {pairs, cutoff};
}

// Exact while C(n,2) < 64.
double small_sparse_ratio(SparseCount c) {
  std::uint64_t sum = 0;
  std::uint64_t term = 1;  // C(pairs, m)
  for (std::uint64_t m = 0; m <= c.cutoff; ++m) {
    sum += term;
    term = term / (m + 1) * (c.pairs - m) + term % (m + 1) * (c.pairs - m) / (m + 1);
  }
  return std::ldexp(static_cast<double>(sum), -static_cast<int>(c.pairs));
}

// log C(pairs, m) - pairs*log 2, built by the ratio recurrence in extended precision.
long double large_sparse_log_ratio(SparseCount c) {
  std::vector<long double> logs;
  logs.reserve(c.cutoff + 1);
  long double current = -static_cast<long double>(c.pairs) * std::log(2.0L);
  logs.push_back(current);
  for (std::uint64_t m = 1; m <= c.cutoff; ++m) {
    current += std::log(static_cast<long double>(c.pairs - m + 1) / static_cast<long double>(m));
    logs.push_back(current);
  }
  const long double top = *std::max_element(logs.begin(), logs.end());
  long double acc = 0.0L;
  for (auto v : logs) acc += std::exp(v - top);
  return std::min(0.0L, top + std::log(acc));
}

}  // namespace

double sparse_graph_ratio(std::size_t n, double d) {
  const auto c = sparse_cutoff(n, d);
  if (c.cutoff == c.pairs) return 1.0;
  if (c.pairs < 64) return small_sparse_ratio(c);
  return static_cast<double>(std::exp(large_sparse_log_ratio(c)));
}

double sparse_graph_log_ratio(std::size_t n, double d) {
  const auto c = sparse_cutoff(n, d);
  if (c.cutoff == c.pairs) return 0.0;
  if (c.pairs < 64) return std::log(small_sparse_ratio(c));
  return static_cast<double>(large_sparse_log_ratio(c));
}

double pc_cmax_threshold(std::size_t n, double p1, double delta1) {
  require_open_unit(p1, "p1");
  require_open_unit(delta1, "delta1");
  if (n < 2) throw DomainError("n", "must be at least 2");
  return 0.5 * p1 * p1 * (delta1 * static_cast<double>(n) - 2.0);
}

double pc_adjacency_threshold(std::size_t n, double p1, double delta2) {
  require_open_unit(p1, "p1");
  require_open_unit(delta2, "delta2");
  if (n < 2) throw DomainError("n", "must be at least 2");
  return 0.5 * p1 * (delta2 * static_cast<double>(n) - 2.0);
}

SgsCallBounds sgs_calls_lower_bound(const SgsBoundInput& in) {
  if (in.n < 3) throw DomainError("n", "must be at least 3");
  require_open_unit(in.p1, "p1");
  const double m = static_cast<double>(in.n - 2);
  const double base = 2.0 - in.p1 * in.p1;
  const double alpha = 1.0 + std::exp(-m * std::log(base));
  const double conditional = std::expm1(m * std::log(2.0 / base)) / alpha;
  const double unconditional = in.p1 * std::exp2(m) + (1.0 - in.p1) * conditional;
  return {conditional, unconditional, alpha};
}

}  // namespace dsep::bounds
