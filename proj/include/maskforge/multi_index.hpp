#pragma once

#include <cstddef>
#include <vector>

#include "maskforge/rational.hpp"

namespace maskforge {

using MultiIndex = std::vector<int>;

inline int total_order(const MultiIndex& a) {
  int s = 0;
  for (int x : a) s += x;
  return s;
}

/// All multi-indices of length d with total order exactly n, in lexicographic order.
std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int n);

/// All multi-indices with total order <= n, grouped by order, lexicographic within a group.
std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int n);

/// Componentwise beta <= alpha.
bool dominated(const MultiIndex& beta, const MultiIndex& alpha);

Integer binomial(long n, long k);
Integer factorial(long n);

/// Product of binomials C(alpha_i, beta_i).
Integer multi_binomial(const MultiIndex& alpha, const MultiIndex& beta);

/// prod_i x_i^{a_i}, with 0^0 = 1.
Rational monomial_value(const RatVec& x, const MultiIndex& a);

}  // namespace maskforge
