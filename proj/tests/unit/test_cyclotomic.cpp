#include <mpfr.h>

#include <random>

#include "doctest.h"
#include "maskforge/cyclotomic.hpp"
#include "maskforge/error.hpp"
#include "oracles.hpp"

using namespace maskforge;

namespace {

// Real and imaginary parts of sum_k coords[k] zeta_N^k in MPFR at `bits`.
struct BigComplex {
  mpfr_t re;
  mpfr_t im;
  explicit BigComplex(mpfr_prec_t bits) {
    mpfr_init2(re, bits);
    mpfr_init2(im, bits);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
  }
  ~BigComplex() {
    mpfr_clear(re);
    mpfr_clear(im);
  }
  BigComplex(const BigComplex&) = delete;
  BigComplex& operator=(const BigComplex&) = delete;
};

void evaluate(const Cyclotomic& x, mpfr_prec_t bits, BigComplex& out) {
  mpfr_t angle, c, s, q;
  mpfr_inits2(bits, angle, c, s, q, static_cast<mpfr_ptr>(nullptr));
  const long long n = x.order();
  for (long long k = 0; k < n; ++k) {
    const Rational& a = x.coords()[static_cast<std::size_t>(k)];
    if (a == 0) continue;
    mpfr_const_pi(angle, MPFR_RNDN);
    mpfr_mul_si(angle, angle, 2 * k, MPFR_RNDN);
    mpfr_div_si(angle, angle, n, MPFR_RNDN);
    mpfr_sin_cos(s, c, angle, MPFR_RNDN);
    mpfr_set_q(q, a.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(c, c, q, MPFR_RNDN);
    mpfr_mul(s, s, q, MPFR_RNDN);
    mpfr_add(out.re, out.re, c, MPFR_RNDN);
    mpfr_add(out.im, out.im, s, MPFR_RNDN);
  }
  mpfr_clears(angle, c, s, q, static_cast<mpfr_ptr>(nullptr));
}

// |x| below 2^-100, judged at 256 bits.
bool numerically_zero(const Cyclotomic& x) {
  BigComplex v(256);
  evaluate(x, 256, v);
  mpfr_t mag;
  mpfr_init2(mag, 256);
  mpfr_hypot(mag, v.re, v.im, MPFR_RNDN);
  const bool zero = mpfr_zero_p(mag) || mpfr_get_exp(mag) < -100;
  mpfr_clear(mag);
  return zero;
}

Rational magnitude_512(const Cyclotomic& x) {
  BigComplex v(512);
  evaluate(x, 512, v);
  mpfr_t mag;
  mpfr_init2(mag, 512);
  mpfr_hypot(mag, v.re, v.im, MPFR_RNDN);
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, mag);
  Rational r(q);
  mpq_clear(q);
  mpfr_clear(mag);
  return r;
}

Cyclotomic random_root_sum(oracle::Rng& rng, long long order) {
  std::uniform_int_distribution<long long> k(0, order - 1);
  Cyclotomic x;
  for (int s = 0; s < 5; ++s) x += Cyclotomic::root_of_unity(order, k(rng)) * Cyclotomic(oracle::random_rational(rng, 3, 2));
  return x;
}

}  // namespace

TEST_SUITE("cyclotomic") {

TEST_CASE("roots of unity") {
  const Cyclotomic i = Cyclotomic::root_of_unity(4, 1);
  CHECK(i * i == Cyclotomic(-1));
  CHECK(Cyclotomic::root_of_unity(1, 0) == Cyclotomic(1));
  CHECK((Cyclotomic::root_of_unity(3, 0) + Cyclotomic::root_of_unity(3, 1) + Cyclotomic::root_of_unity(3, 2)).is_zero());
  CHECK(Cyclotomic::root_of_unity(8, 1) * Cyclotomic::root_of_unity(8, 7) == Cyclotomic(1));
  CHECK((Cyclotomic(1) + i) * (Cyclotomic(1) - i) == Cyclotomic(2));
  CHECK(Cyclotomic::root_of_unity(2, 1).promoted(4).coords() == Cyclotomic(-1).promoted(4).coords());
  CHECK(Cyclotomic::exp_2pi_i(Rational(1, 2)) == Cyclotomic(-1));
  CHECK(Cyclotomic::exp_2pi_i(Rational(3, 4)) == Cyclotomic::root_of_unity(4, 3));
  CHECK(Cyclotomic::exp_2pi_i(Rational(-5, 6)) == Cyclotomic::root_of_unity(6, 1));
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<long long>{-1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<long long>{1, 0, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<long long>{1, 0, -1, 0, 1});
  for (long long n = 1; n <= 40; ++n)
    CHECK(static_cast<long long>(cyclotomic_polynomial(n).size()) - 1 == totient(n));
}

TEST_CASE("magnitude intervals") {
  const auto width_ok = [](const RationalInterval& iv) { return iv.hi - iv.lo < make_rational(1, 1LL << 30); };
  const RationalInterval a = Cyclotomic(Rational(3, 4)).magnitude_interval(128);
  CHECK(a.contains(Rational(3, 4)));
  CHECK(width_ok(a));
  const RationalInterval z = Cyclotomic().magnitude_interval(128);
  CHECK(z.lo == 0);
  CHECK(width_ok(z));
  const RationalInterval r2 = (Cyclotomic(1) + Cyclotomic::root_of_unity(4, 1)).magnitude_interval(128);
  CHECK(r2.lo * r2.lo <= 2);
  CHECK(r2.hi * r2.hi >= 2);
  CHECK(width_ok(r2));
}

TEST_CASE("zero test agrees with high-precision evaluation") {
  oracle::Rng rng(21);
  int zeros = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const long long order = std::vector<long long>{3, 4, 5, 6, 8, 12, 15}[static_cast<std::size_t>(trial % 7)];
    Cyclotomic x = random_root_sum(rng, order);
    if (trial % 3 == 0) x -= x.galois(1);  // forced zero
    if (trial % 5 == 0) {
      // Full orbit sums vanish for order > 1.
      x = Cyclotomic();
      for (long long k = 0; k < order; ++k) x += Cyclotomic::root_of_unity(order, k);
    }
    const bool zero = x.is_zero();
    zeros += zero ? 1 : 0;
    CHECK(zero == numerically_zero(x));
    CHECK(zero == std::all_of(x.coords().begin(), x.coords().end(), [](const Rational& c) { return c == 0; }));
  }
  CHECK(zeros > 20);
}

TEST_CASE("field axioms") {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const long long oa = std::vector<long long>{1, 3, 4, 5, 6, 8}[static_cast<std::size_t>(trial % 6)];
    const long long ob = std::vector<long long>{2, 4, 6, 10, 12}[static_cast<std::size_t>(trial % 5)];
    const Cyclotomic a = random_root_sum(rng, oa);
    const Cyclotomic b = random_root_sum(rng, ob);
    const Cyclotomic c = random_root_sum(rng, 6);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
    if (!b.is_zero()) CHECK(a / b * b == a);
    CHECK((a * b).conj() == a.conj() * b.conj());
  }
}

TEST_CASE("magnitude interval contains the 512-bit value") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Cyclotomic x = random_root_sum(rng, std::vector<long long>{1, 4, 5, 7, 12}[static_cast<std::size_t>(trial % 5)]);
    const RationalInterval iv = x.magnitude_interval(128);
    const Rational ref = magnitude_512(x);
    // The 512-bit value is within 2^-500 of the truth; the interval is far wider.
    CHECK(iv.lo <= ref + Rational(1, Integer(1) << 500));
    CHECK(iv.hi >= ref - Rational(1, Integer(1) << 500));
  }
}

TEST_CASE("division by zero") {
  try {
    Cyclotomic().inverse();
    FAIL("expected an exception");
  } catch (const MaskError& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
}

}  // TEST_SUITE
