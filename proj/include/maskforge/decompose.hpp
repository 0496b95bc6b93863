#pragma once

#include <cstddef>
#include <vector>

#include "maskforge/lattice.hpp"
#include "maskforge/trigpoly.hpp"

namespace maskforge {

using PolyGrid = std::vector<std::vector<TrigPoly>>;

/// (1 - z_k) t(x) = sum_j t_jk(x) (1 - e^{2 pi i (M^* x, e_j)}),  entries[j][k] = t_jk.
struct MaskDecomposition {
  TrigPoly source;
  PolyGrid entries;
  /// Polyphase components tau_{jk nu} of each entry (filled by algorithm1).
  std::vector<PolyGrid> polyphase;
  /// Every entry is in Z^{achieved_class} (-1: no claim).
  int achieved_class = -1;
};

/// Decomposition of a Z^0 mask by telescoping division of the shifted polyphase
/// differences. Throws NotInZ0.
MaskDecomposition algorithm1(const TrigPoly& t, const DilationContext& ctx);

/// Lifts a decomposition of t in Z^N (N > 1) to one with entries in Z^{N-1}.
/// Throws NotInClass, or InternalIdentityViolation if the preserved sum breaks.
MaskDecomposition algorithm2(const TrigPoly& t, const MaskDecomposition& dec, const DilationContext& ctx, int order);

/// The two-entry update for d = 2, N = 2 written out directly.
MaskDecomposition algorithm2_planar(const TrigPoly& t, const MaskDecomposition& dec, const DilationContext& ctx);

/// Best available decomposition for a mask of known class: algorithm2 when class >= 2.
MaskDecomposition decompose(const TrigPoly& t, const DilationContext& ctx, int known_class);

/// Exact check of (1 - z_k) t = sum_j t_jk delta_j for every k.
bool decomposition_identity_holds(const TrigPoly& t, const PolyGrid& entries, const DilationContext& ctx);
/// t_jk(0) = (M^{-1})_jk t(0).
bool decomposition_values_hold(const TrigPoly& t, const PolyGrid& entries, const DilationContext& ctx);

/// Entries t_{jk} for tuples j, k in {1..d}^n, flattened with the first
/// tuple component most significant.
struct IteratedDecomposition {
  int order = 0;
  std::size_t dim = 0;
  PolyGrid entries;
  /// Entries are in Z^{class_guarantee} = Z^{n0 - n - 1}.
  int class_guarantee = -1;

  /// T_{k,j} = t_{jk}.
  const TrigPoly& T(std::size_t k, std::size_t j) const { return entries[j][k]; }
};

std::vector<std::size_t> tuple_of(std::size_t flat, std::size_t dim, int order);
std::size_t flat_of(const std::vector<std::size_t>& tuple, std::size_t dim);

/// Requires t in Z^{n0-1} and n <= n0 (NotInClass otherwise).
IteratedDecomposition iterated_decomposition(const TrigPoly& t, const DilationContext& ctx, int n, int n0);

/// Delta^{[n]} t = T delta^{[n]}, exactly.
bool iterated_identity_holds(const TrigPoly& t, const IteratedDecomposition& it, const DilationContext& ctx);
/// T(0) = t(0) (M^{*-1})^{[n]}, exactly.
bool iterated_values_hold(const TrigPoly& t, const IteratedDecomposition& it, const DilationContext& ctx);

RatMatrix kronecker_power(const RatMatrix& a, int n);

}  // namespace maskforge
