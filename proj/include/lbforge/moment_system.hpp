#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lbforge/rational.hpp"

namespace lbforge {

// Exponent vector a = (a_1..a_D) indexing moments and monomials.
struct MultiIndex {
  std::vector<int> exponents;

  int dim() const { return static_cast<int>(exponents.size()); }
  int order() const;
  bool all_even() const;
  bool any_odd() const { return !all_even(); }
  MultiIndex canonical() const;  // sorted non-increasing

  bool operator==(const MultiIndex&) const = default;
};

// Macroscopic state (rho, u, theta) in dimensionless units. u is
// zero-padded beyond the model dimension.
struct MacroState {
  double rho = 1.0;
  std::array<double, 3> u{0.0, 0.0, 0.0};
  double theta = 1.0;
};

// Number of partitions of q into natural numbers, pi(0) = 1.
// Throws std::overflow_error if the count exceeds the 64-bit range.
std::int64_t partition_count(int q);

// Partitions of q into at most D parts (equivalently, largest part <= D).
std::int64_t partition_count_restricted(int q, int D);

// Omega(m, D) = sum_{q=0}^{m} pi(q, D): number of independent even moment
// constraints for an order-m model in D dimensions.
std::int64_t equation_count(int m, int D);

// All partitions of q into at most max_parts parts, each partition sorted
// non-increasing, generated descending-first.
std::vector<std::vector<int>> enumerate_partitions(int q, int max_parts);

// Canonical even constraint multi-indices for an order-m model: doublings
// of every partition of q = 0..m into <= D parts, zero-padded to length D.
// Ordered by total order, then lexicographically descending.
// Size equals equation_count(m, D); includes the all-zero index.
std::vector<MultiIndex> enumerate_constraints(int m, int D);

// Normalized Gaussian moment (1/pi^{D/2}) Int exp(-v^2) v^a dv as an exact
// rational: prod_alpha (a_alpha - 1)!! / 2^{a_alpha/2}, or 0 when any
// exponent is odd.
Rational gaussian_moment(const MultiIndex& a);

// Raw moment of the D-dimensional Maxwellian: rho * prod_alpha mu_{a_alpha}
// where mu_k is the k-th raw moment of a 1D Gaussian with mean u_alpha and
// variance theta/2. Rejects theta <= 0.
double maxwellian_moment(const MultiIndex& a, const MacroState& state);

}  // namespace lbforge
