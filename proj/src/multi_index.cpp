#include "maskforge/multi_index.hpp"

namespace maskforge {

namespace {

void fill(std::size_t pos, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur[pos] = v;
    fill(pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  if (d == 0 || n < 0) return out;
  MultiIndex cur(d, 0);
  fill(0, n, cur, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= n; ++k) {
    auto level = multi_indices_of_order(d, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

bool dominated(const MultiIndex& beta, const MultiIndex& alpha) {
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (beta[i] > alpha[i]) return false;
  return true;
}

Integer binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Integer factorial(long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Integer multi_binomial(const MultiIndex& alpha, const MultiIndex& beta) {
  Integer r = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) r *= binomial(alpha[i], beta[i]);
  return r;
}

Rational monomial_value(const RatVec& x, const MultiIndex& a) {
  Rational r = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int e = 0; e < a[i]; ++e) r *= x[i];
  return r;
}

}  // namespace maskforge
