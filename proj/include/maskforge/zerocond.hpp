#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "maskforge/cyclotomic.hpp"
#include "maskforge/lattice.hpp"
#include "maskforge/multi_index.hpp"
#include "maskforge/trigpoly.hpp"

namespace maskforge {

/// lambda'_beta = D^beta t(M^{*-1} x)|_{x=0} / (2 pi i)^{[beta]} for all [beta] <= order.
struct LambdaTable {
  int order = 0;
  std::size_t dim = 0;
  std::map<MultiIndex, Cyclotomic> values;

  const Cyclotomic& at(const MultiIndex& beta) const;
  friend bool operator==(const LambdaTable&, const LambdaTable&) = default;
};

/// Membership in Z^n straight from the definition: every normalized derivative
/// of t(M^{*-1} x) of order <= n vanishes at every nonzero dual digit.
bool in_class_by_definition(const TrigPoly& t, const DilationContext& ctx, int n);
/// Same question answered through the polyphase components only.
bool in_class_by_polyphase(const TrigPoly& t, const DilationContext& ctx, int n);

int zero_condition_order_by_definition(const TrigPoly& t, const DilationContext& ctx, int cap);
int zero_condition_order_by_polyphase(const TrigPoly& t, const DilationContext& ctx, int cap);

/// Largest n <= cap with t in Z^n, or -1. Both checkers run; a disagreement
/// throws MethodDisagreement.
int zero_condition_order(const TrigPoly& t, const DilationContext& ctx, int cap = 4);

/// Right-hand side of the polyphase criterion:
/// (1/m) sum_{beta <= alpha} lambda'_beta C(alpha, beta) (-r_k)^{alpha - beta}.
Cyclotomic polyphase_target(const LambdaTable& table, const DilationContext& ctx, std::size_t k,
                            const MultiIndex& alpha);

/// lambda'_alpha = m D'^alpha tau_0(0); the criterion is rechecked for every
/// other polyphase component (NotInClass on failure).
LambdaTable lambda_parameters(const TrigPoly& t, const DilationContext& ctx, int n);

/// poly * (2 pi i)^{two_pi_i_power}. Only poly is ever computed with.
struct ScaledTrigPoly {
  TrigPoly poly;
  int two_pi_i_power = 0;
};

/// g_{N delta} with D^gamma g(0) = [gamma == delta] for [gamma] <= N, returned as
/// G * (2 pi i)^{-[delta]} where G has normalized derivatives D'^gamma G(0) = [gamma == delta].
/// Integer frequencies in 0..N per axis.
ScaledTrigPoly g_poly(int order, const MultiIndex& delta, std::size_t dim);

/// H_nu(x) = h_nu(M^* x) = (1/m) sum_mu e^{-2 pi i (s*_nu, M^{-1} s_mu)} e^{2 pi i (s_mu, x)}.
TrigPoly h_poly(std::size_t nu, const DilationContext& ctx);

/// Mask in Z^{table.order} whose lambda table is `table`.
TrigPoly mask_from_lambdas(const DilationContext& ctx, const LambdaTable& table);

}  // namespace maskforge
