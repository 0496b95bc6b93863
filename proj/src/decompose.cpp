#include "maskforge/decompose.hpp"

#include <string>

#include "maskforge/error.hpp"
#include "maskforge/zerocond.hpp"

namespace maskforge {

namespace {

TrigPoly preserved_sum(const PolyGrid& entries, std::size_t k, const std::vector<TrigPoly>& deltas) {
  TrigPoly sum(deltas.front().dim());
  for (std::size_t j = 0; j < entries.size(); ++j) sum += entries[j][k] * deltas[j];
  return sum;
}

std::vector<TrigPoly> all_deltas(const DilationContext& ctx) {
  std::vector<TrigPoly> deltas;
  for (std::size_t j = 0; j < ctx.dim(); ++j) deltas.push_back(delta_poly(ctx.matrix(), j));
  return deltas;
}

Cyclotomic value_at_zero(const TrigPoly& p) { return p.eval(RatVec(p.dim(), 0)); }

void require_valid(const TrigPoly& t, const PolyGrid& entries, const DilationContext& ctx, const char* who) {
  if (!decomposition_identity_holds(t, entries, ctx)) {
    throw MaskError(ErrorKind::InternalIdentityViolation, std::string(who) + ": decomposition identity fails");
  }
  if (!decomposition_values_hold(t, entries, ctx)) {
    throw MaskError(ErrorKind::InternalIdentityViolation, std::string(who) + ": t_jk(0) != (M^-1)_jk t(0)");
  }
}

void require_class(const PolyGrid& entries, const DilationContext& ctx, int n, const char* who) {
  for (const auto& row : entries)
    for (const auto& e : row)
      if (!in_class_by_definition(e, ctx, n)) {
        throw MaskError(ErrorKind::InternalIdentityViolation,
                        std::string(who) + ": entry not in Z^" + std::to_string(n));
      }
}

}  // namespace

MaskDecomposition algorithm1(const TrigPoly& t, const DilationContext& ctx) {
  if (!in_class_by_polyphase(t, ctx, 0)) throw MaskError(ErrorKind::NotInZ0, "mask is not in Z^0");
  const std::size_t d = ctx.dim();
  const std::size_t m = ctx.m();
  const auto taus = polyphase_split(t, ctx);
  const CosetKey& key = ctx.coset_key();

  MaskDecomposition dec;
  dec.source = t;
  dec.polyphase.assign(d, std::vector<std::vector<TrigPoly>>(d, std::vector<TrigPoly>(m, TrigPoly(d))));
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t nu = 0; nu < m; ++nu) {
      // Step 1: the unique n* with e_k - s_nu + s_{n*} in M Z^d.
      IntVec base = ctx.digits()[nu];
      for (auto& x : base) x = -x;
      base[k] += 1;
      IntVec neg = base;
      for (auto& x : neg) x = -x;
      const std::size_t star = ctx.coset_index(neg);
      IntVec v = base;
      for (std::size_t i = 0; i < d; ++i) v[i] += ctx.digits()[star][i];
      const IntVec l = key.divide(v);
      // Step 2: shifted polyphase difference, vanishing at z = 1.
      const TrigPoly p = taus[nu] - taus[star].shifted(l);
      // Step 3: telescoping over the axes.
      TrigPoly prev = p;
      for (std::size_t j = 0; j < d; ++j) {
        TrigPoly next = prev.substitute_one(j);
        dec.polyphase[j][k][nu] = (prev - next).divide_one_minus_z(j);
        prev = std::move(next);
      }
      if (!prev.is_zero()) throw MaskError(ErrorKind::InternalIdentityViolation, "telescoping remainder is nonzero");
    }
  }
  dec.entries.assign(d, std::vector<TrigPoly>(d));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) dec.entries[j][k] = polyphase_assemble(dec.polyphase[j][k], ctx);
  require_valid(t, dec.entries, ctx, "algorithm1");
  if (in_class_by_polyphase(t, ctx, 1)) {
    require_class(dec.entries, ctx, 0, "algorithm1");
    dec.achieved_class = 0;
  }
  return dec;
}

MaskDecomposition algorithm2(const TrigPoly& t, const MaskDecomposition& dec, const DilationContext& ctx, int order) {
  if (order <= 1) {
    MaskDecomposition out = dec;
    out.achieved_class = std::max(out.achieved_class, order - 1);
    return out;
  }
  if (!in_class_by_definition(t, ctx, order)) {
    throw MaskError(ErrorKind::NotInClass, "mask is not in Z^" + std::to_string(order));
  }
  const std::size_t d = ctx.dim();
  const std::size_t m = ctx.m();
  const std::vector<TrigPoly> deltas = all_deltas(ctx);
  std::vector<TrigPoly> h;
  for (std::size_t nu = 0; nu < m; ++nu) h.push_back(h_poly(nu, ctx));

  PolyGrid entries = dec.entries;
  for (int n = 1; n < order; ++n) {
    for (std::size_t l = 0; l + 1 < d; ++l) {
      for (std::size_t k = 0; k < d; ++k) {
        const TrigPoly before = preserved_sum(entries, k, deltas);
        const TrigPoly a = entries[l][k].compose_inverse_dilate(ctx.matrix());
        for (std::size_t j = l + 1; j < d; ++j) {
          // Sum over [beta] = n, beta_j > 0, beta_{l+1} = ... = beta_{j-1} = 0 of q_{beta j}(M^* x).
          TrigPoly s(d);
          for (const auto& beta : multi_indices_of_order(d, n)) {
            if (beta[j] == 0) continue;
            bool gap = false;
            for (std::size_t i = l + 1; i < j; ++i) gap = gap || beta[i] != 0;
            if (gap) continue;
            TrigPoly interp(d);
            for (std::size_t nu = 1; nu < m; ++nu) {
              const Cyclotomic w = a.normalized_derivative(beta, to_rat_vec(ctx.dual_digits()[nu]));
              if (!w.is_zero()) interp += h[nu] * w;
            }
            if (interp.is_zero()) continue;
            MultiIndex lowered = beta;
            lowered[j] -= 1;
            const ScaledTrigPoly g = g_poly(n - 1, lowered, d);
            // q = (2 pi i)^{-1} * g * (2 pi i)^{n} D'^beta a; the powers must cancel.
            if (-1 + g.two_pi_i_power + n != 0) {
              throw MaskError(ErrorKind::InternalIdentityViolation, "2 pi i powers do not cancel");
            }
            // The Leibniz rule puts a factor beta_j on D^beta(c_j q); divide it out.
            s -= g.poly.compose_dilate(ctx.matrix()) * interp * Cyclotomic(make_rational(1, beta[j]));
          }
          if (s.is_zero()) continue;
          entries[l][k] -= deltas[j] * s;
          entries[j][k] += deltas[l] * s;
        }
        if (preserved_sum(entries, k, deltas) != before) {
          throw MaskError(ErrorKind::InternalIdentityViolation, "algorithm2 changed the preserved sum");
        }
      }
    }
  }
  MaskDecomposition out;
  out.source = t;
  out.entries = std::move(entries);
  require_valid(t, out.entries, ctx, "algorithm2");
  require_class(out.entries, ctx, order - 1, "algorithm2");
  out.achieved_class = order - 1;
  return out;
}

MaskDecomposition algorithm2_planar(const TrigPoly& t, const MaskDecomposition& dec, const DilationContext& ctx) {
  if (ctx.dim() != 2) throw MaskError(ErrorKind::DimensionMismatch, "planar update needs d = 2");
  if (!in_class_by_definition(t, ctx, 2)) throw MaskError(ErrorKind::NotInClass, "mask is not in Z^2");
  const std::vector<TrigPoly> deltas = all_deltas(ctx);
  PolyGrid entries = dec.entries;
  const MultiIndex e2{0, 1};
  for (std::size_t k = 0; k < 2; ++k) {
    const TrigPoly a = dec.entries[0][k].compose_inverse_dilate(ctx.matrix());
    TrigPoly s(2);
    for (std::size_t nu = 1; nu < ctx.m(); ++nu) {
      s += h_poly(nu, ctx) * a.normalized_derivative(e2, to_rat_vec(ctx.dual_digits()[nu]));
    }
    entries[0][k] += deltas[1] * s;
    entries[1][k] -= deltas[0] * s;
  }
  MaskDecomposition out;
  out.source = t;
  out.entries = std::move(entries);
  require_valid(t, out.entries, ctx, "algorithm2_planar");
  out.achieved_class = 1;
  return out;
}

MaskDecomposition decompose(const TrigPoly& t, const DilationContext& ctx, int known_class) {
  MaskDecomposition dec = algorithm1(t, ctx);
  if (known_class >= 2) return algorithm2(t, dec, ctx, known_class);
  return dec;
}

bool decomposition_identity_holds(const TrigPoly& t, const PolyGrid& entries, const DilationContext& ctx) {
  const std::size_t d = ctx.dim();
  if (entries.size() != d) return false;
  const std::vector<TrigPoly> deltas = all_deltas(ctx);
  for (std::size_t k = 0; k < d; ++k) {
    if (entries[k].size() != d) return false;
    if (c_poly(d, k) * t != preserved_sum(entries, k, deltas)) return false;
  }
  return true;
}

bool decomposition_values_hold(const TrigPoly& t, const PolyGrid& entries, const DilationContext& ctx) {
  const Cyclotomic t0 = value_at_zero(t);
  for (std::size_t j = 0; j < ctx.dim(); ++j)
    for (std::size_t k = 0; k < ctx.dim(); ++k) {
      Cyclotomic expected = t0;
      expected *= ctx.inverse()(j, k);
      if (value_at_zero(entries[j][k]) != expected) return false;
    }
  return true;
}

std::vector<std::size_t> tuple_of(std::size_t flat, std::size_t dim, int order) {
  std::vector<std::size_t> tuple(static_cast<std::size_t>(order));
  for (int l = order - 1; l >= 0; --l) {
    tuple[static_cast<std::size_t>(l)] = flat % dim;
    flat /= dim;
  }
  return tuple;
}

std::size_t flat_of(const std::vector<std::size_t>& tuple, std::size_t dim) {
  std::size_t flat = 0;
  for (std::size_t x : tuple) flat = flat * dim + x;
  return flat;
}

IteratedDecomposition iterated_decomposition(const TrigPoly& t, const DilationContext& ctx, int n, int n0) {
  if (n < 1 || n > n0) throw MaskError(ErrorKind::NotInClass, "iterated decomposition needs 1 <= n <= n0");
  if (!in_class_by_definition(t, ctx, n0 - 1)) {
    throw MaskError(ErrorKind::NotInClass, "mask is not in Z^" + std::to_string(n0 - 1));
  }
  const std::size_t d = ctx.dim();
  PolyGrid current{{t}};
  for (int level = 1; level <= n; ++level) {
    const int cls = n0 - level;  // class of the polynomials being split at this level
    const std::size_t size = current.size();
    PolyGrid next(size * d, std::vector<TrigPoly>(size * d));
    for (std::size_t jp = 0; jp < size; ++jp) {
      for (std::size_t kp = 0; kp < size; ++kp) {
        const MaskDecomposition dec = decompose(current[jp][kp], ctx, cls);
        for (std::size_t jn = 0; jn < d; ++jn)
          for (std::size_t kn = 0; kn < d; ++kn) next[jp * d + jn][kp * d + kn] = dec.entries[jn][kn];
      }
    }
    current = std::move(next);
  }
  IteratedDecomposition it;
  it.order = n;
  it.dim = d;
  it.entries = std::move(current);
  it.class_guarantee = n0 - n - 1;
  if (!iterated_identity_holds(t, it, ctx) || !iterated_values_hold(t, it, ctx)) {
    throw MaskError(ErrorKind::InternalIdentityViolation, "iterated decomposition identity fails");
  }
  return it;
}

bool iterated_identity_holds(const TrigPoly& t, const IteratedDecomposition& it, const DilationContext& ctx) {
  const std::size_t d = ctx.dim();
  const std::size_t size = it.entries.size();
  const std::vector<TrigPoly> deltas = all_deltas(ctx);
  auto product = [&](std::size_t flat, bool dual) {
    TrigPoly p = TrigPoly::constant(d, 1);
    for (std::size_t x : tuple_of(flat, d, it.order)) p = p * (dual ? deltas[x] : c_poly(d, x));
    return p;
  };
  std::vector<TrigPoly> delta_products;
  for (std::size_t j = 0; j < size; ++j) delta_products.push_back(product(j, true));
  for (std::size_t k = 0; k < size; ++k) {
    TrigPoly rhs(d);
    for (std::size_t j = 0; j < size; ++j) rhs += it.entries[j][k] * delta_products[j];
    if (product(k, false) * t != rhs) return false;
  }
  return true;
}

bool iterated_values_hold(const TrigPoly& t, const IteratedDecomposition& it, const DilationContext& ctx) {
  const RatMatrix kron = kronecker_power(ctx.dual_inverse(), it.order);
  const Cyclotomic t0 = value_at_zero(t);
  for (std::size_t k = 0; k < kron.rows(); ++k)
    for (std::size_t j = 0; j < kron.cols(); ++j) {
      Cyclotomic expected = t0;
      expected *= kron(k, j);
      if (value_at_zero(it.T(k, j)) != expected) return false;
    }
  return true;
}

RatMatrix kronecker_power(const RatMatrix& a, int n) {
  RatMatrix out = RatMatrix::identity(1);
  for (int step = 0; step < n; ++step) {
    RatMatrix next(a.rows() * out.rows(), a.cols() * out.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t r = 0; r < out.rows(); ++r)
          for (std::size_t c = 0; c < out.cols(); ++c) next(i * out.rows() + r, j * out.cols() + c) = a(i, j) * out(r, c);
    out = std::move(next);
  }
  return out;
}

}  // namespace maskforge
