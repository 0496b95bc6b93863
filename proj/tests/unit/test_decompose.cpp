#include "doctest.h"
#include "maskforge/decompose.hpp"
#include "maskforge/error.hpp"
#include "maskforge/io.hpp"
#include "oracles.hpp"

using namespace maskforge;

namespace {

void check_decomposition(const TrigPoly& t, const MaskDecomposition& dec, const DilationContext& ctx, oracle::Rng& rng) {
  CHECK(oracle::decomposition_identity(t, dec.entries, ctx));
  CHECK(oracle::decomposition_identity_numeric(t, dec.entries, ctx, rng));
  CHECK(oracle::decomposition_values(t, dec.entries, ctx));
  CHECK(decomposition_identity_holds(t, dec.entries, ctx));
  CHECK(decomposition_values_hold(t, dec.entries, ctx));
  if (dec.achieved_class >= 0)
    for (const auto& row : dec.entries)
      for (const auto& e : row) CHECK(in_class_by_definition(e, ctx, dec.achieved_class));
}

TrigPoly poly_from(const io::json& coefficients) {
  TrigPoly::Terms terms;
  for (const auto& c : coefficients) {
    const IntVec n = c.at("freq").get<IntVec>();
    terms.emplace(n, Cyclotomic(parse_rational(c.at("value").get<std::string>())));
  }
  return TrigPoly(2, std::move(terms));
}

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("worked example entries") {
  const DilationContext ctx = oracle::example_context();
  const TrigPoly t = oracle::example_mask(ctx);
  const MaskDecomposition dec = algorithm1(t, ctx);
  oracle::Rng rng(51);
  check_decomposition(t, dec, ctx, rng);

  const auto q = [](long long n) { return Cyclotomic(make_rational(n, 16)); };
  const TrigPoly tau110 = TrigPoly::monomial(2, {0, 0}, q(-1)) + TrigPoly::monomial(2, {0, 1}, q(2)) +
                          TrigPoly::monomial(2, {1, 1}, q(1)) + TrigPoly::monomial(2, {0, 2}, q(2)) +
                          TrigPoly::monomial(2, {1, 2}, q(1));
  CHECK(dec.polyphase[0][0][0] == tau110);
  CHECK(dec.polyphase[1][0][0] == TrigPoly::monomial(2, {0, 0}, q(5)) + TrigPoly::monomial(2, {0, 1}, q(3)));
  CHECK(dec.polyphase[1][1][1].is_zero());
  CHECK(dec.polyphase[1][1][3].is_zero());
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) CHECK(polyphase_assemble(dec.polyphase[j][k], ctx) == dec.entries[j][k]);
}

TEST_CASE("worked example table with its allowlist") {
  const DilationContext ctx = oracle::example_context();
  const TrigPoly t = oracle::example_mask(ctx);
  const MaskDecomposition dec = algorithm1(t, ctx);
  const io::json table = io::read_json_file(oracle::data_path("example_m4_table.json"));
  const io::json allow = io::read_json_file(oracle::data_path("example_m4_allowlist.json"));
  const auto allowed = [&](int j, int k, int nu) {
    for (const auto& e : allow.at("entries"))
      if (e.at("j") == j && e.at("k") == k && e.at("nu") == nu) return true;
    return false;
  };
  int matched = 0;
  int mismatched = 0;
  for (const auto& e : table.at("entries")) {
    const int j = e.at("j");
    const int k = e.at("k");
    const int nu = e.at("nu");
    const TrigPoly printed = poly_from(e.at("coefficients"));
    const TrigPoly& ours = dec.polyphase[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(nu)];
    if (printed == ours) {
      ++matched;
      continue;
    }
    ++mismatched;
    CHECK(allowed(j, k, nu));
    // The printed entry, put in place of ours, must break the identity.
    auto swapped = dec.polyphase;
    swapped[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(nu)] = printed;
    PolyGrid entries = dec.entries;
    entries[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)] =
        polyphase_assemble(swapped[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)], ctx);
    CHECK_FALSE(oracle::decomposition_identity(t, entries, ctx));
  }
  CHECK(matched + mismatched == 16);
  CHECK(mismatched <= static_cast<int>(allow.at("entries").size()));
}

TEST_CASE("univariate 1 + z") {
  const DilationContext ctx = DilationContext::create(IntMatrix(1, {2}));
  const MaskDecomposition dec = algorithm1(oracle::binomial_mask(1), ctx);
  CHECK(dec.entries[0][0] == TrigPoly::constant(1, Cyclotomic(1)));
}

TEST_CASE("masks outside Z0 are rejected") {
  const DilationContext ctx = oracle::example_context();
  try {
    algorithm1(TrigPoly::constant(2, Cyclotomic(1)), ctx);
    FAIL("expected NotInZ0");
  } catch (const MaskError& e) {
    CHECK(e.kind() == ErrorKind::NotInZ0);
  }
}

TEST_CASE("algorithm 1 on random masks") {
  oracle::Rng rng(52);
  const std::vector<DilationContext> contexts{oracle::example_context(), DilationContext::create(IntMatrix::scalar(2, 2)),
                                              oracle::random_dilation(rng, 2, 6), oracle::random_dilation(rng, 3, 4),
                                              DilationContext::create(IntMatrix(1, {3}))};
  for (const auto& ctx : contexts)
    for (int trial = 0; trial < 8; ++trial) {
      const int n = trial % 2;
      const TrigPoly t = oracle::product(mask_from_lambdas(ctx, oracle::random_lambdas(rng, ctx, n, trial % 4 < 2)),
                                         oracle::random_poly(rng, ctx.dim(), 2, 1, 2, 2));
      if (!in_class_by_definition(t, ctx, 0)) continue;
      const MaskDecomposition dec = algorithm1(t, ctx);
      check_decomposition(t, dec, ctx, rng);
      // Entries of a Z1 mask land in Z0.
      if (in_class_by_definition(t, ctx, 1)) {
        for (const auto& row : dec.entries)
          for (const auto& e : row) CHECK(in_class_by_definition(e, ctx, 0));
      }
    }
}

TEST_CASE("decompositions imply Z0") {
  // Entries built by hand rather than by algorithm 1.
  oracle::Rng rng(53);
  const DilationContext ctx = DilationContext::create(IntMatrix::scalar(2, 2));
  for (int trial = 0; trial < 10; ++trial) {
    // t = u * prod_j (1 + z_j): then (1 - z_k) t = t_kk (1 - z_k^2) with t_kk = u prod_{j != k} (1 + z_j).
    const TrigPoly u = oracle::random_poly(rng, 2, 3, 2);
    const TrigPoly p0 = TrigPoly::constant(2, Cyclotomic(1)) + TrigPoly::monomial(2, {1, 0});
    const TrigPoly p1 = TrigPoly::constant(2, Cyclotomic(1)) + TrigPoly::monomial(2, {0, 1});
    const TrigPoly t = oracle::product(oracle::product(u, p0), p1);
    PolyGrid entries(2, std::vector<TrigPoly>(2, TrigPoly(2)));
    entries[0][0] = oracle::product(u, p1);
    entries[1][1] = oracle::product(u, p0);
    REQUIRE(oracle::decomposition_identity(t, entries, ctx));
    CHECK(in_class_by_definition(t, ctx, 0));
  }
}

TEST_CASE("algorithm 2 lifts the class") {
  oracle::Rng rng(54);
  const std::vector<DilationContext> contexts{oracle::example_context(), DilationContext::create(IntMatrix::scalar(2, 2)),
                                              DilationContext::create(IntMatrix(1, {2}))};
  for (const auto& ctx : contexts)
    for (int n = 2; n <= 3; ++n) {
      if (n == 3 && ctx.dim() != 1) continue;
      const TrigPoly t = mask_from_lambdas(ctx, oracle::random_lambdas(rng, ctx, n, true));
      const MaskDecomposition base = algorithm1(t, ctx);
      const MaskDecomposition lifted = algorithm2(t, base, ctx, n);
      CHECK(lifted.achieved_class == n - 1);
      check_decomposition(t, lifted, ctx, rng);
      for (const auto& row : lifted.entries)
        for (const auto& e : row) CHECK(in_class_by_definition(e, ctx, n - 1));
    }
}

TEST_CASE("planar update agrees with the general one on class") {
  oracle::Rng rng(55);
  const DilationContext ctx = oracle::example_context();
  for (int trial = 0; trial < 3; ++trial) {
    const TrigPoly t = mask_from_lambdas(ctx, oracle::random_lambdas(rng, ctx, 2, true));
    const MaskDecomposition planar = algorithm2_planar(t, algorithm1(t, ctx), ctx);
    check_decomposition(t, planar, ctx, rng);
    for (const auto& row : planar.entries)
      for (const auto& e : row) CHECK(in_class_by_definition(e, ctx, 1));
  }
}

TEST_CASE("tuple indexing") {
  for (std::size_t d = 1; d <= 3; ++d)
    for (int n = 1; n <= 3; ++n) {
      std::size_t count = 1;
      for (int s = 0; s < n; ++s) count *= d;
      for (std::size_t flat = 0; flat < count; ++flat) {
        const auto tuple = tuple_of(flat, d, n);
        CHECK(tuple.size() == static_cast<std::size_t>(n));
        CHECK(flat_of(tuple, d) == flat);
      }
    }
  CHECK(tuple_of(1, 2, 2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("kronecker powers") {
  oracle::Rng rng(56);
  RatMatrix a(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) a(i, j) = oracle::random_rational(rng, 5, 3);
  for (int n = 0; n <= 3; ++n) CHECK(kronecker_power(a, n) == oracle::kron_power(a, n));
}

TEST_CASE("iterated decompositions") {
  oracle::Rng rng(57);
  const std::vector<DilationContext> contexts{oracle::example_context(), DilationContext::create(IntMatrix::scalar(2, 2)),
                                              DilationContext::create(IntMatrix(1, {2}))};
  for (const auto& ctx : contexts)
    for (int n = 1; n <= 2; ++n) {
      const int n0 = n + 1;
      const TrigPoly t = mask_from_lambdas(ctx, oracle::random_lambdas(rng, ctx, n0 - 1, true));
      const IteratedDecomposition it = iterated_decomposition(t, ctx, n, n0);
      CHECK(it.order == n);
      CHECK(oracle::iterated_identity(t, it, ctx));
      CHECK(oracle::iterated_values(t, it, ctx));
      CHECK(iterated_identity_holds(t, it, ctx));
      CHECK(iterated_values_hold(t, it, ctx));
      for (const auto& row : it.entries)
        for (const auto& e : row) CHECK(in_class_by_definition(e, ctx, it.class_guarantee));
    }
  // The worked example at depth 1 reproduces algorithm 1.
  const DilationContext ctx = oracle::example_context();
  const TrigPoly t = oracle::example_mask(ctx);
  const IteratedDecomposition it = iterated_decomposition(t, ctx, 1, 1);
  const MaskDecomposition dec = algorithm1(t, ctx);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) CHECK(it.T(k, j) == dec.entries[j][k]);
  try {
    iterated_decomposition(t, ctx, 2, 1);
    FAIL("expected NotInClass");
  } catch (const MaskError& e) {
    CHECK(e.kind() == ErrorKind::NotInClass);
  }
}

}  // TEST_SUITE
