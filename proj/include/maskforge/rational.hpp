#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace maskforge {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVec = std::vector<long long>;
using RatVec = std::vector<Rational>;

/// Parses "p/q" or "p" (optionally signed). Decimal points and exponents are rejected.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);

Rational make_rational(long long num, long long den = 1);

/// True if every entry has denominator 1.
bool is_integral(const RatVec& v);
IntVec to_int_vec(const RatVec& v);
RatVec to_rat_vec(const IntVec& v);

long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);
/// Remainder in [0, |m|).
long long floor_mod(long long a, long long m);

/// Closed interval [lo, hi] with rational endpoints. Used for certified
/// magnitudes and norms; exact values have lo == hi.
struct RationalInterval {
  Rational lo;
  Rational hi;

  static RationalInterval exact(const Rational& v) { return {v, v}; }

  bool is_exact() const { return lo == hi; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  /// Certified strict comparison: the whole interval lies below `bound`.
  bool certainly_below(const Rational& bound) const { return hi < bound; }

  RationalInterval& operator+=(const RationalInterval& other) {
    lo += other.lo;
    hi += other.hi;
    return *this;
  }
};

RationalInterval operator+(RationalInterval a, const RationalInterval& b);
/// Product with a nonnegative rational factor.
RationalInterval scale(const RationalInterval& a, const Rational& nonneg);
/// Product of two intervals of nonnegative numbers.
RationalInterval multiply_nonneg(const RationalInterval& a, const RationalInterval& b);
RationalInterval max(const RationalInterval& a, const RationalInterval& b);
std::string to_string(const RationalInterval& iv);

/// Interval precision in bits: MASKFORGE_PRECISION_BITS if set and >= 32, else 128.
int default_precision_bits();

}  // namespace maskforge
