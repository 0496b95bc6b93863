#include "maskforge/zerocond.hpp"

#include <string>

#include "maskforge/error.hpp"

namespace maskforge {

namespace {

/// Does every normalized derivative of order exactly n of a vanish at the nonzero dual digits?
bool level_vanishes(const TrigPoly& a, const DilationContext& ctx, int n) {
  for (const auto& beta : multi_indices_of_order(ctx.dim(), n)) {
    for (std::size_t nu = 1; nu < ctx.m(); ++nu) {
      if (!a.normalized_derivative(beta, to_rat_vec(ctx.dual_digits()[nu])).is_zero()) return false;
    }
  }
  return true;
}

LambdaTable table_from_tau0(const TrigPoly& tau0, const DilationContext& ctx, int n) {
  LambdaTable table;
  table.order = n;
  table.dim = ctx.dim();
  const RatVec origin(ctx.dim(), 0);
  const Cyclotomic m(static_cast<long long>(ctx.m()));
  for (const auto& alpha : multi_indices_up_to(ctx.dim(), n)) {
    table.values.emplace(alpha, m * tau0.normalized_derivative(alpha, origin));
  }
  return table;
}

bool level_matches(const std::vector<TrigPoly>& taus, const LambdaTable& table, const DilationContext& ctx, int n) {
  const RatVec origin(ctx.dim(), 0);
  for (const auto& alpha : multi_indices_of_order(ctx.dim(), n)) {
    for (std::size_t k = 1; k < ctx.m(); ++k) {
      if (taus[k].normalized_derivative(alpha, origin) != polyphase_target(table, ctx, k, alpha)) return false;
    }
  }
  return true;
}

/// Weights w_0..w_N with sum_e w_e e^k = [k == target] for k = 0..N.
std::vector<Rational> moment_weights(int order, int target) {
  const auto n = static_cast<std::size_t>(order + 1);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t e = 0; e < n; ++e) {
      Rational p = 1;
      for (std::size_t i = 0; i < k; ++i) p *= static_cast<long>(e);
      a[k][e] = p;
    }
    a[k][n] = (static_cast<int>(k) == target) ? 1 : 0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    const Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<Rational> w(n);
  for (std::size_t e = 0; e < n; ++e) w[e] = a[e][n];
  return w;
}

}  // namespace

const Cyclotomic& LambdaTable::at(const MultiIndex& beta) const {
  auto it = values.find(beta);
  if (it == values.end()) throw MaskError(ErrorKind::DimensionMismatch, "lambda table has no entry for this multi-index");
  return it->second;
}

bool in_class_by_definition(const TrigPoly& t, const DilationContext& ctx, int n) {
  if (n < 0) return true;
  const TrigPoly a = t.compose_inverse_dilate(ctx.matrix());
  for (int k = 0; k <= n; ++k)
    if (!level_vanishes(a, ctx, k)) return false;
  return true;
}

bool in_class_by_polyphase(const TrigPoly& t, const DilationContext& ctx, int n) {
  if (n < 0) return true;
  const auto taus = polyphase_split(t, ctx);
  const LambdaTable table = table_from_tau0(taus[0], ctx, n);
  for (int k = 0; k <= n; ++k)
    if (!level_matches(taus, table, ctx, k)) return false;
  return true;
}

int zero_condition_order_by_definition(const TrigPoly& t, const DilationContext& ctx, int cap) {
  const TrigPoly a = t.compose_inverse_dilate(ctx.matrix());
  for (int n = 0; n <= cap; ++n)
    if (!level_vanishes(a, ctx, n)) return n - 1;
  return cap;
}

int zero_condition_order_by_polyphase(const TrigPoly& t, const DilationContext& ctx, int cap) {
  const auto taus = polyphase_split(t, ctx);
  const LambdaTable table = table_from_tau0(taus[0], ctx, cap);
  for (int n = 0; n <= cap; ++n)
    if (!level_matches(taus, table, ctx, n)) return n - 1;
  return cap;
}

int zero_condition_order(const TrigPoly& t, const DilationContext& ctx, int cap) {
  const int by_def = zero_condition_order_by_definition(t, ctx, cap);
  const int by_poly = zero_condition_order_by_polyphase(t, ctx, cap);
  if (by_def != by_poly) {
    throw MaskError(ErrorKind::MethodDisagreement, "definition gives order " + std::to_string(by_def) +
                                                       ", polyphase criterion gives " + std::to_string(by_poly));
  }
  return by_def;
}

Cyclotomic polyphase_target(const LambdaTable& table, const DilationContext& ctx, std::size_t k,
                            const MultiIndex& alpha) {
  RatVec minus_r = ctx.r(k);
  for (auto& x : minus_r) x = -x;
  Cyclotomic sum;
  for (const auto& [beta, lambda] : table.values) {
    if (total_order(beta) > total_order(alpha) || !dominated(beta, alpha)) continue;
    MultiIndex rest(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) rest[i] = alpha[i] - beta[i];
    const Rational w = Rational(multi_binomial(alpha, beta)) * monomial_value(minus_r, rest);
    if (w == 0) continue;
    Cyclotomic term = lambda;
    term *= w;
    sum += term;
  }
  sum *= make_rational(1, static_cast<long long>(ctx.m()));
  return sum;
}

LambdaTable lambda_parameters(const TrigPoly& t, const DilationContext& ctx, int n) {
  const auto taus = polyphase_split(t, ctx);
  LambdaTable table = table_from_tau0(taus[0], ctx, n);
  for (int k = 0; k <= n; ++k) {
    if (!level_matches(taus, table, ctx, k)) {
      throw MaskError(ErrorKind::NotInClass, "mask is not in Z^" + std::to_string(n) + " (fails at order " +
                                                 std::to_string(k) + ")");
    }
  }
  return table;
}

ScaledTrigPoly g_poly(int order, const MultiIndex& delta, std::size_t dim) {
  if (delta.size() != dim) throw MaskError(ErrorKind::DimensionMismatch, "multi-index has wrong dimension");
  if (total_order(delta) > order) throw MaskError(ErrorKind::DimensionMismatch, "[delta] exceeds N");
  TrigPoly g = TrigPoly::constant(dim, 1);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto w = moment_weights(order, delta[i]);
    TrigPoly::Terms line;
    for (std::size_t e = 0; e < w.size(); ++e) {
      if (w[e] == 0) continue;
      IntVec n(dim, 0);
      n[i] = static_cast<long long>(e);
      line.emplace(std::move(n), Cyclotomic(w[e]));
    }
    g = g * TrigPoly(dim, std::move(line));
  }
  return {std::move(g), -total_order(delta)};
}

TrigPoly h_poly(std::size_t nu, const DilationContext& ctx) {
  const RatVec s_star = to_rat_vec(ctx.dual_digits().at(nu));
  TrigPoly::Terms terms;
  const Rational inv_m = make_rational(1, static_cast<long long>(ctx.m()));
  for (std::size_t mu = 0; mu < ctx.m(); ++mu) {
    Rational phase = 0;
    for (std::size_t i = 0; i < ctx.dim(); ++i) phase -= s_star[i] * ctx.r(mu)[i];
    Cyclotomic c = Cyclotomic::exp_2pi_i(phase);
    c *= inv_m;
    terms.emplace(ctx.digits()[mu], c);
  }
  return TrigPoly(ctx.dim(), std::move(terms));
}

TrigPoly mask_from_lambdas(const DilationContext& ctx, const LambdaTable& table) {
  if (table.dim != ctx.dim()) throw MaskError(ErrorKind::DimensionMismatch, "lambda table dimension differs from dilation");
  const auto alphas = multi_indices_up_to(ctx.dim(), table.order);
  std::vector<TrigPoly> basis;
  basis.reserve(alphas.size());
  for (const auto& alpha : alphas) basis.push_back(g_poly(table.order, alpha, ctx.dim()).poly);
  std::vector<TrigPoly> taus;
  for (std::size_t k = 0; k < ctx.m(); ++k) {
    TrigPoly tau(ctx.dim());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const Cyclotomic target = polyphase_target(table, ctx, k, alphas[i]);
      if (!target.is_zero()) tau += basis[i] * target;
    }
    taus.push_back(std::move(tau));
  }
  return polyphase_assemble(taus, ctx);
}

}  // namespace maskforge
