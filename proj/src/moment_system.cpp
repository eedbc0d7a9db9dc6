#include "lbforge/moment_system.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace lbforge {

int MultiIndex::order() const {
  int s = 0;
  for (int e : exponents) s += e;
  return s;
}

bool MultiIndex::all_even() const {
  for (int e : exponents)
    if (e % 2 != 0) return false;
  return true;
}

MultiIndex MultiIndex::canonical() const {
  MultiIndex c = *this;
  std::sort(c.exponents.begin(), c.exponents.end(), std::greater<int>());
  return c;
}

std::int64_t partition_count_restricted(int q, int D) {
  if (q < 0) throw std::invalid_argument("partition count: q < 0");
  if (D < 1) throw std::invalid_argument("partition count: D < 1");
  // table[k][r]: partitions of r into parts of size <= k
  // (equivalent to "at most k parts" by Ferrers conjugation)
  std::vector<std::int64_t> row(q + 1, 0);
  row[0] = 1;
  for (int k = 1; k <= std::min(D, q); ++k) {
    for (int r = k; r <= q; ++r) {
      if (__builtin_add_overflow(row[r], row[r - k], &row[r]))
        throw std::overflow_error("partition count overflow");
    }
  }
  return row[q];
}

std::int64_t partition_count(int q) {
  return partition_count_restricted(q, std::max(q, 1));
}

std::int64_t equation_count(int m, int D) {
  if (m < 0) throw std::invalid_argument("equation_count: m < 0");
  std::int64_t total = 0;
  for (int q = 0; q <= m; ++q) {
    if (__builtin_add_overflow(total, partition_count_restricted(q, D), &total))
      throw std::overflow_error("equation_count overflow");
  }
  return total;
}

std::vector<std::vector<int>> enumerate_partitions(int q, int max_parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // descending-first: each new part is <= the previous one
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_parts) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(q, q);
  if (q == 0) out = {{}};
  return out;
}

std::vector<MultiIndex> enumerate_constraints(int m, int D) {
  if (D < 1 || D > 4)
    throw std::invalid_argument("enumerate_constraints: D must be in 1..4");
  std::vector<MultiIndex> out;
  for (int q = 0; q <= m; ++q) {
    std::vector<MultiIndex> level;
    for (const auto& part : enumerate_partitions(q, D)) {
      MultiIndex idx;
      idx.exponents.assign(D, 0);
      for (std::size_t i = 0; i < part.size(); ++i)
        idx.exponents[i] = 2 * part[i];
      level.push_back(idx);
    }
    // within one total order: lexicographically descending
    std::sort(level.begin(), level.end(),
              [](const MultiIndex& a, const MultiIndex& b) {
                return a.exponents > b.exponents;
              });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

namespace {
std::int64_t double_factorial(int n) {
  // (-1)!! = 1 by convention
  std::int64_t r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}
}  // namespace

Rational gaussian_moment(const MultiIndex& a) {
  Rational r(1);
  for (int e : a.exponents) {
    if (e < 0) throw std::invalid_argument("gaussian_moment: negative exponent");
    if (e % 2 != 0) return Rational(0);
    r = r * Rational(double_factorial(e - 1), std::int64_t(1) << (e / 2));
  }
  return r;
}

double maxwellian_moment(const MultiIndex& a, const MacroState& state) {
  if (state.theta <= 0)
    throw std::invalid_argument("maxwellian_moment: theta must be positive");
  const double var = state.theta / 2.0;
  double result = state.rho;
  for (int alpha = 0; alpha < a.dim(); ++alpha) {
    const double u = state.u[static_cast<std::size_t>(alpha)];
    // mu_k = u mu_{k-1} + (k-1) var mu_{k-2}
    double mu_prev = 0.0, mu = 1.0;
    for (int k = 1; k <= a.exponents[static_cast<std::size_t>(alpha)]; ++k) {
      const double next = u * mu + (k - 1) * var * mu_prev;
      mu_prev = mu;
      mu = next;
    }
    result *= mu;
  }
  return result;
}

}  // namespace lbforge
