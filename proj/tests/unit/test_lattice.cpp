#include <cmath>
#include <set>

#include "doctest.h"
#include "maskforge/error.hpp"
#include "maskforge/lattice.hpp"
#include "oracles.hpp"

using namespace maskforge;

TEST_SUITE("lattice") {

TEST_CASE("determinant") {
  CHECK(determinant(IntMatrix(2, {0, 2, 2, -1})) == -4);
  CHECK(determinant(IntMatrix(2, {2, 0, 0, 2})) == 4);
  CHECK(determinant(IntMatrix::identity(2)) == 1);

  oracle::Rng rng(11);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 4;
    std::vector<long long> a(d * d);
    for (auto& x : a) x = e(rng);
    const IntMatrix m(d, a);
    CHECK(m.determinant() == oracle::det_leibniz(m));
  }
}

TEST_CASE("inverse and adjugate") {
  const IntMatrix m(2, {0, 2, 2, -1});
  const RatMatrix inv = inverse(m);
  CHECK(RatMatrix(m) * inv == RatMatrix::identity(2));
  CHECK(inv(0, 0) == Rational(1, 4));
  CHECK(inv(0, 1) == Rational(1, 2));
  CHECK(inv(1, 0) == Rational(1, 2));
  CHECK(inv(1, 1) == 0);
}

TEST_CASE("overflow is reported") {
  const IntMatrix big(1, {3037000500LL});
  CHECK_THROWS(big * big);
}

TEST_CASE("digit sets") {
  const IntMatrix m = oracle::example_matrix();
  CHECK_NOTHROW(digit_set(m, oracle::example_digits()));
  CHECK(digit_set(IntMatrix(1, {2})) == std::vector<IntVec>{{0}, {1}});

  const auto canonical = digit_set(m);
  REQUIRE(canonical.size() == 4);
  CHECK(canonical.front() == IntVec{0, 0});
  for (std::size_t a = 0; a < canonical.size(); ++a)
    for (std::size_t b = a + 1; b < canonical.size(); ++b) CHECK_FALSE(oracle::congruent(m, canonical[a], canonical[b]));

  SUBCASE("invalid user digits") {
    const auto kind_of = [&](const std::vector<IntVec>& digits) {
      try {
        digit_set(m, digits);
      } catch (const MaskError& e) {
        return e.kind();
      }
      return ErrorKind::Parse;
    };
    CHECK(kind_of({{0, 0}, {1, 0}, {0, 1}}) == ErrorKind::UserDigitsInvalid);
    CHECK(kind_of({{0, 0}, {1, 0}, {0, 1}, {2, 0}}) == ErrorKind::UserDigitsInvalid);
    CHECK(kind_of({{1, 0}, {0, 0}, {0, 1}, {1, 1}}) == ErrorKind::UserDigitsInvalid);
  }
}

TEST_CASE("dilation context rejects non-dilations") {
  const auto kind_of = [](const IntMatrix& m) {
    try {
      DilationContext::create(m);
    } catch (const MaskError& e) {
      return e.kind();
    }
    return ErrorKind::Parse;
  };
  CHECK(kind_of(IntMatrix(2, {1, 0, 0, 2})) == ErrorKind::NotDilation);
  CHECK(kind_of(IntMatrix(2, {1, 1, 1, 1})) == ErrorKind::NotDilation);
  CHECK(kind_of(IntMatrix(2, {0, 1, 1, 0})) == ErrorKind::NotDilation);
}

TEST_CASE("coset index") {
  const DilationContext ctx = oracle::example_context();
  const std::size_t nu = ctx.coset_index({2, 1});
  CHECK(oracle::congruent(ctx.matrix(), {2, 1}, ctx.digits()[nu]));
  for (std::size_t k = 0; k < 4; ++k)
    if (k != nu) CHECK_FALSE(oracle::congruent(ctx.matrix(), {2, 1}, ctx.digits()[k]));
  CHECK(ctx.coset_index({0, 0}) == 0);

  const IntVec l{5, -2};
  IntVec n = ctx.matrix().apply(l);
  for (std::size_t i = 0; i < 2; ++i) n[i] += ctx.digits()[3][i];
  CHECK(ctx.coset_index(n) == 3);
  CHECK(ctx.coset_offset(n) == l);
}

TEST_CASE("coset index is invariant under lattice shifts") {
  oracle::Rng rng(5);
  std::uniform_int_distribution<int> e(-6, 6);
  for (int trial = 0; trial < 6; ++trial) {
    const DilationContext ctx =
        trial == 0 ? oracle::example_context() : oracle::random_dilation(rng, trial % 2 == 0 ? 3 : 2, 6);
    const std::size_t d = ctx.dim();
    for (int s = 0; s < 40; ++s) {
      IntVec n(d);
      IntVec l(d);
      for (auto& x : n) x = e(rng);
      for (auto& x : l) x = e(rng);
      IntVec shifted = ctx.matrix().apply(l);
      for (std::size_t i = 0; i < d; ++i) shifted[i] += n[i];
      CHECK(ctx.coset_index(n) == ctx.coset_index(shifted));
      const std::size_t nu = ctx.coset_index(n, true);
      IntVec dual_shift = ctx.dual_matrix().apply(l);
      for (std::size_t i = 0; i < d; ++i) dual_shift[i] += n[i];
      CHECK(nu == ctx.coset_index(dual_shift, true));
    }
  }
}

TEST_CASE("canonical digits are a bijection onto cosets") {
  oracle::Rng rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const DilationContext ctx = oracle::random_dilation(rng, trial % 2 == 0 ? 2 : 3, 6);
    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < ctx.m(); ++k) seen.insert(ctx.coset_index(ctx.digits()[k]));
    CHECK(seen.size() == ctx.m());
    CHECK(ctx.m() == static_cast<std::size_t>(Integer(abs(oracle::det_leibniz(ctx.matrix()))).get_si()));
    for (std::size_t k = 0; k < ctx.m(); ++k) {
      CHECK(ctx.coset_index(ctx.digits()[k]) == k);
      CHECK(ctx.coset_index(ctx.dual_digits()[k], true) == k);
    }
  }
}

TEST_CASE("r_k = M^-1 s_k") {
  const DilationContext ctx = oracle::example_context();
  for (std::size_t k = 0; k < ctx.m(); ++k) CHECK(ctx.r(k) == oracle::solve(ctx.matrix(), to_rat_vec(ctx.digits()[k])));
}

TEST_CASE("fourier matrix is unitary") {
  CHECK(oracle::fourier_matrix_unitary(oracle::example_context()));
  oracle::Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) CHECK(oracle::fourier_matrix_unitary(oracle::random_dilation(rng, 2 + trial % 2, 6)));
}

TEST_CASE("isotropy") {
  CHECK(is_isotropic(IntMatrix::scalar(2, 2)).verdict == Isotropy::Yes);
  const IsotropyReport ex = is_isotropic(oracle::example_matrix());
  CHECK(ex.verdict == Isotropy::No);
  REQUIRE(ex.eigenvalue_moduli.size() == 2);
  const double s17 = std::sqrt(17.0);
  CHECK(ex.eigenvalue_moduli[0] == doctest::Approx((s17 - 1) / 2));
  CHECK(ex.eigenvalue_moduli[1] == doctest::Approx((s17 + 1) / 2));
  CHECK(is_isotropic(IntMatrix(2, {1, -1, 1, 1})).verdict == Isotropy::Yes);
  // A Jordan block has equal moduli but is not diagonalizable.
  CHECK(is_isotropic(IntMatrix(2, {2, 1, 0, 2})).verdict != Isotropy::Yes);
}

TEST_CASE("power norms") {
  CHECK(power_inf_norm(IntMatrix::identity(2), 5) == 1);
  CHECK(power_inf_norm(oracle::example_matrix().transpose(), 1) == 3);
  CHECK(power_inf_norm(IntMatrix::scalar(2, 2), 3) == 8);
  oracle::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const IntMatrix m = oracle::random_dilation(rng, 2 + trial % 2, 6).matrix();
    for (unsigned a = 1; a <= 3; ++a) {
      CHECK(power_inf_norm(m, a) == Rational(oracle::power_row_sum(m, a)));
      for (unsigned b = 1; b <= 3; ++b) CHECK(power_inf_norm(m, a + b) <= power_inf_norm(m, a) * power_inf_norm(m, b));
    }
  }
}

}  // TEST_SUITE
