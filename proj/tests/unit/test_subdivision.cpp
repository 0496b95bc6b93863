#include <cmath>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "maskforge/decompose.hpp"
#include "maskforge/error.hpp"
#include "maskforge/subdivision.hpp"
#include "oracles.hpp"

using namespace maskforge;

namespace {

DilationContext dyadic() { return DilationContext::create(IntMatrix(1, {2})); }

MatrixMask identity_symbol(std::size_t n, std::size_t dim) {
  MatrixMask m(n, n, dim);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = TrigPoly::constant(dim, Cyclotomic(1));
  return m;
}

// max_beta |(S^{n+1} f)_{M beta} - (S^n f)_beta|
Rational cauchy_step(const MatrixMask& mask, const IntMatrix& m, const Sequence& f, unsigned n) {
  Sequence a = f;
  for (unsigned i = 0; i < n; ++i) a = apply(mask, m, a);
  const Sequence b = apply(mask, m, a);
  Rational best = 0;
  std::set<IntVec> betas;
  for (const auto& [beta, v] : a.values) betas.insert(beta);
  for (const auto& [alpha, v] : b.values) {
    const RatVec pre = oracle::solve(m, to_rat_vec(alpha));
    if (is_integral(pre)) betas.insert(to_int_vec(pre));
  }
  for (const IntVec& beta : betas) {
    const Rational diff = abs(b.at(m.apply(beta))[0] - a.at(beta)[0]);
    best = std::max(best, diff);
  }
  return best;
}

TrigPoly lambda_mask(oracle::Rng& rng, const DilationContext& ctx, int order) {
  return mask_from_lambdas(ctx, oracle::random_lambdas(rng, ctx, order, true));
}

}  // namespace

TEST_SUITE("subdivision") {

TEST_CASE("apply") {
  const IntMatrix m = oracle::example_matrix();
  oracle::Rng rng(61);
  const Sequence f = oracle::random_sequence(rng, 2, 1, 6, 3);
  const Sequence out = apply(identity_symbol(1, 2), m, f);
  CHECK(out.values.size() == f.values.size());
  for (const auto& [beta, v] : f.values) CHECK(out.at(m.apply(beta)) == v);

  const DilationContext ctx = oracle::example_context();
  const TrigPoly t = oracle::example_mask(ctx);
  const Sequence resp = apply(MatrixMask::scalar(t), m, Sequence::delta(2, 1, {0, 0}));
  CHECK(resp.values.size() == t.size());
  for (const auto& [n, c] : t.terms()) CHECK(resp.at(n)[0] == c.rational_value());

  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const std::size_t rows = 1 + trial % 3;
    const std::size_t cols = 1 + (trial / 3) % 2;
    const IntMatrix dil = d == 1 ? IntMatrix(1, {trial % 2 == 0 ? 2 : -3}) : oracle::random_dilation(rng, 2, 6).matrix();
    const MatrixMask mask = oracle::random_matrix_mask(rng, rows, cols, d, 3, 2);
    const Sequence g = oracle::random_sequence(rng, d, cols, 5, 3);
    CHECK(apply(mask, dil, g) == oracle::apply(mask, dil, g));
  }

  try {
    apply(MatrixMask::scalar(t), m, Sequence::delta(2, 2, {0, 0}));
    FAIL("expected ShapeMismatch");
  } catch (const MaskError& e) {
    CHECK(e.kind() == ErrorKind::ShapeMismatch);
  }
}

TEST_CASE("gradient") {
  const Sequence g = gradient(Sequence::delta(1, 1, {0}));
  CHECK(g.at({0}) == RatVec{1});
  CHECK(g.at({1}) == RatVec{-1});
  CHECK(g.values.size() == 2);

  // Linear samples have constant differences inside the box.
  Sequence lin{2, 1, {}};
  for (long long a = -3; a <= 3; ++a)
    for (long long b = -3; b <= 3; ++b) lin.add({a, b}, 0, make_rational(2 * a - 5 * b, 1));
  lin.prune();
  const Sequence gl = gradient(lin);
  for (long long a = -2; a <= 3; ++a)
    for (long long b = -2; b <= 3; ++b) CHECK(gl.at({a, b}) == RatVec{2, -5});

  oracle::Rng rng(62);
  const Sequence w = oracle::random_sequence(rng, 2, 2, 6, 3);
  const Sequence gw = gradient(w);
  CHECK(gw.width == 4);
  CHECK(gw == oracle::gradient(w));
  for (int trial = 0; trial < 20; ++trial) {
    const Sequence f = oracle::random_sequence(rng, 1 + trial % 3, 1 + trial % 2, 5, 3);
    CHECK(gradient(f) == oracle::gradient(f));
  }
}

TEST_CASE("difference identities") {
  oracle::Rng rng(63);
  const DilationContext ex = oracle::example_context();
  const TrigPoly t_ex = oracle::example_mask(ex);
  const MatrixMask T_ex = difference_mask(t_ex, ex);
  for (int trial = 0; trial < 10; ++trial) {
    const Sequence f = oracle::random_sequence(rng, 2, 1, 6, 3);
    CHECK(gradient(apply(MatrixMask::scalar(t_ex), ex.matrix(), f)) == apply(T_ex, ex.matrix(), gradient(f)));
  }

  const std::vector<DilationContext> contexts{ex, DilationContext::create(IntMatrix::scalar(2, 2)), dyadic()};
  for (const auto& ctx : contexts) {
    const TrigPoly t = lambda_mask(rng, ctx, 1);
    const MatrixMask T = difference_mask(t, ctx);
    const MatrixMask Q = second_difference_mask(T, ctx);
    CHECK(Q.rows() == ctx.dim() * ctx.dim());
    for (int trial = 0; trial < 5; ++trial) {
      const Sequence f = oracle::random_sequence(rng, ctx.dim(), 1, 5, 3);
      CHECK(oracle::gradient(oracle::apply(MatrixMask::scalar(t), ctx.matrix(), f)) ==
            oracle::apply(T, ctx.matrix(), oracle::gradient(f)));
      const Sequence g = oracle::random_sequence(rng, ctx.dim(), ctx.dim(), 5, 3);
      CHECK(oracle::gradient(oracle::apply(T, ctx.matrix(), g)) == oracle::apply(Q, ctx.matrix(), oracle::gradient(g)));
    }
  }
}

TEST_CASE("coset sums of the difference mask") {
  oracle::Rng rng(64);
  const std::vector<DilationContext> contexts{oracle::example_context(), DilationContext::create(IntMatrix::scalar(2, 2)),
                                              dyadic(), oracle::random_dilation(rng, 2, 5)};
  for (const auto& ctx : contexts) {
    const TrigPoly t = lambda_mask(rng, ctx, 1);
    const auto sums = coset_sums(difference_mask(t, ctx), ctx);
    REQUIRE(sums.size() == ctx.m());
    const IntMatrix mt = ctx.matrix().transpose();
    for (const auto& s : sums)
      for (std::size_t i = 0; i < ctx.dim(); ++i) {
        RatVec e(ctx.dim(), Rational(0));
        e[i] = 1;
        const RatVec col = oracle::solve(mt, e);  // column i of M*^{-1}
        for (std::size_t k = 0; k < ctx.dim(); ++k) CHECK(s[k][i] == Cyclotomic(col[k]));
      }
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(identity_symbol(2, 2), oracle::example_matrix(), 128).hi == 1);
  const DilationContext ctx = oracle::example_context();
  const RationalInterval n = operator_norm(difference_mask(oracle::example_mask(ctx), ctx), ctx.matrix(), 128);
  CHECK(n.is_exact());
  CHECK(n.hi == Rational(15, 16));

  oracle::Rng rng(65);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const std::size_t rows = 1 + trial % 2;
    const IntMatrix dil = d == 1 ? IntMatrix(1, {2 + trial % 2}) : oracle::random_dilation(rng, 2, 4, 2).matrix();
    const MatrixMask mask = oracle::random_matrix_mask(rng, rows, rows, d, 3, 1);
    CHECK(operator_norm(mask, dil, 128).hi == oracle::sign_pattern_norm(mask, dil));
  }

  // Cyclotomic coefficients give a certified enclosure.
  const MatrixMask cyc = MatrixMask::scalar(TrigPoly::monomial(1, {0}, Cyclotomic(1) + Cyclotomic::root_of_unity(4, 1)));
  const RationalInterval iv = operator_norm(cyc, IntMatrix(1, {2}), 128);
  CHECK(iv.lo * iv.lo <= 2);
  CHECK(iv.hi * iv.hi >= 2);
}

TEST_CASE("power symbol") {
  oracle::Rng rng(66);
  const MatrixMask T = oracle::random_matrix_mask(rng, 2, 2, 2, 3, 1);
  const IntMatrix m = oracle::example_matrix();
  CHECK(power_symbol(T, m, 1) == T);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const std::size_t w = 1 + trial % 2;
    const IntMatrix dil = d == 1 ? IntMatrix(1, {2}) : (trial % 4 == 1 ? m : IntMatrix::scalar(2, 2));
    const MatrixMask mask = oracle::random_matrix_mask(rng, w, w, d, 3, 1);
    for (unsigned k = 1; k <= 3; ++k) {
      const MatrixMask p = power_symbol(mask, dil, k);
      for (std::size_t c = 0; c < w; ++c) {
        const Sequence delta = Sequence::delta(d, w, IntVec(d, 0), c);
        Sequence iterated = delta;
        for (unsigned i = 0; i < k; ++i) iterated = oracle::apply(mask, dil, iterated);
        CHECK(oracle::apply(p, dil.power(k), delta) == iterated);
      }
    }
  }
}

TEST_CASE("norms are submultiplicative") {
  oracle::Rng rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const IntMatrix dil = d == 1 ? IntMatrix(1, {2}) : oracle::example_matrix();
    const MatrixMask mask = oracle::random_matrix_mask(rng, 2, 2, d, 3, 1);
    for (unsigned a = 1; a <= 2; ++a)
      for (unsigned b = 1; b <= 2; ++b) {
        const Rational ab = operator_norm(power_symbol(mask, dil, a + b), dil.power(a + b), 128).hi;
        const Rational na = operator_norm(power_symbol(mask, dil, a), dil.power(a), 128).hi;
        const Rational nb = operator_norm(power_symbol(mask, dil, b), dil.power(b), 128).hi;
        CHECK(ab <= na * nb);
      }
  }
}

TEST_CASE("convergence verdicts") {
  const DilationContext ctx = oracle::example_context();
  const ConvergenceReport ex = check_convergence(oracle::example_mask(ctx), ctx, 1);
  CHECK(ex.verdict == Verdict::Convergent);
  REQUIRE(ex.certificate.has_value());
  CHECK(*ex.certificate == 1);
  CHECK(ex.trajectory.size() == 1);
  CHECK(ex.trajectory[0].value.hi <= Rational(15, 16));

  const ConvergenceReport full = check_convergence(oracle::example_mask(ctx), ctx, 4);
  CHECK(full.trajectory.size() == 4);
  for (unsigned L = 1; L <= 4; ++L) CHECK(full.trajectory[L - 1].L == L);
  CHECK(full.trajectory[1].value.hi == Rational(155, 256));

  const DilationContext d1 = dyadic();
  const ConvergenceReport hat = check_convergence(oracle::binomial_mask(2), d1, 3);
  CHECK(hat.verdict == Verdict::Convergent);
  CHECK(hat.trajectory[0].value.hi == Rational(1, 2));
  REQUIRE(hat.T.has_value());
  CHECK((*hat.T)(0, 0) == (TrigPoly::constant(1, Cyclotomic(1)) + TrigPoly::monomial(1, {1})) * Cyclotomic(Rational(1, 2)));

  const ConvergenceReport unnorm = check_convergence(oracle::binomial_mask(2) * Cyclotomic(3), d1, 2);
  CHECK(unnorm.verdict == Verdict::Inconclusive);
  CHECK(std::any_of(unnorm.reasons.begin(), unnorm.reasons.end(),
                    [](const std::string& r) { return r.find("normalization failed") != std::string::npos; }));
}

TEST_CASE("smoothness verdicts") {
  const DilationContext ctx = oracle::example_context();
  const SmoothnessReport ex = check_c1(oracle::example_mask(ctx), ctx, 2);
  CHECK(ex.verdict == Verdict::Inconclusive);
  CHECK(ex.isotropy.verdict == Isotropy::No);
  CHECK(std::any_of(ex.reasons.begin(), ex.reasons.end(),
                    [](const std::string& r) { return r.find("not isotropic") != std::string::npos; }));

  const DilationContext d1 = dyadic();
  // Exact values, frozen.
  const SmoothnessReport cubic = check_c1(oracle::binomial_mask(3), d1, 3);
  CHECK(cubic.verdict == Verdict::C1);
  REQUIRE(cubic.certificate.has_value());
  CHECK(*cubic.certificate == 1);
  CHECK(cubic.trajectory[0].value.hi == Rational(1, 2));
  REQUIRE(cubic.Q.has_value());
  CHECK((*cubic.Q)(0, 0) == (TrigPoly::constant(1, Cyclotomic(1)) + TrigPoly::monomial(1, {1})) * Cyclotomic(Rational(1, 4)));

  const SmoothnessReport quartic = check_c1(oracle::binomial_mask(4), d1, 3);
  CHECK(quartic.verdict == Verdict::C1);
  CHECK(quartic.trajectory[0].value.hi == Rational(1, 2));

  const SmoothnessReport hat = check_c1(oracle::binomial_mask(2), d1, 4);
  CHECK(hat.verdict == Verdict::Inconclusive);
  REQUIRE(hat.trajectory.size() == 4);
  for (const auto& step : hat.trajectory) CHECK(step.value.hi == 1);
}

TEST_CASE("refine") {
  const DilationContext d1 = dyadic();
  oracle::Rng rng(68);
  const Sequence f = oracle::random_sequence(rng, 1, 1, 4, 3);
  const auto same = refine(oracle::binomial_mask(2), d1, f, 0);
  CHECK(same.size() == f.values.size());
  for (const auto& s : same) CHECK(f.at(to_int_vec(s.point)) == s.value);

  const auto samples = refine(oracle::binomial_mask(2), d1, Sequence::delta(1, 1, {0}), 10);
  double worst = 0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.value[0].get_d() - oracle::hat(s.point[0].get_d())));
  CHECK(worst < 1e-3);
  CHECK(samples.size() == 2 * 1024 - 1);

  const DilationContext ctx = oracle::example_context();
  const MatrixMask mask = MatrixMask::scalar(oracle::example_mask(ctx));
  const Sequence delta = Sequence::delta(2, 1, {0, 0});
  const auto three = refine(oracle::example_mask(ctx), ctx, delta, 3);
  CHECK_FALSE(three.empty());
  const Rational e1 = cauchy_step(mask, ctx.matrix(), delta, 1);
  const Rational e2 = cauchy_step(mask, ctx.matrix(), delta, 2);
  const Rational e3 = cauchy_step(mask, ctx.matrix(), delta, 3);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
}

}  // TEST_SUITE
