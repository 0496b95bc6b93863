#pragma once

#include <complex>
#include <string>
#include <vector>

#include "maskforge/rational.hpp"

namespace maskforge {

/// Coefficient list of the N-th cyclotomic polynomial, constant term first.
std::vector<long long> cyclotomic_polynomial(long long order);

/// Euler's totient; equals the degree of cyclotomic_polynomial(order).
long long totient(long long order);

/// Exact element of Q(zeta_N), stored as sum_k coords[k] * zeta_N^k.
///
/// The coordinate vector always has length N and is the remainder of the
/// representing polynomial modulo Phi_N, so two values of the same order are
/// equal iff their coordinates are. Rational values are kept at order 1.
class Cyclotomic {
 public:
  Cyclotomic();
  Cyclotomic(const Rational& value);  // NOLINT(google-explicit-constructor)
  Cyclotomic(long long value);        // NOLINT(google-explicit-constructor)

  /// zeta_N^k with k taken mod N.
  static Cyclotomic root_of_unity(long long order, long long k);
  /// e^{2 pi i q} for rational q.
  static Cyclotomic exp_2pi_i(const Rational& q);
  static Cyclotomic from_coords(long long order, std::vector<Rational> coords);

  long long order() const { return order_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_rational() const { return order_ == 1; }
  /// Requires is_rational().
  const Rational& rational_value() const;

  /// Re-express in Q(zeta_target); target must be a multiple of order().
  Cyclotomic promoted(long long target) const;

  Cyclotomic conj() const;
  /// Galois automorphism zeta -> zeta^a, gcd(a, N) = 1.
  Cyclotomic galois(long long a) const;
  /// Throws DivisionByZero for zero.
  Cyclotomic inverse() const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& other);
  Cyclotomic& operator-=(const Cyclotomic& other);
  Cyclotomic& operator*=(const Cyclotomic& other);
  Cyclotomic& operator*=(const Rational& factor);
  Cyclotomic& operator/=(const Cyclotomic& other) { return *this *= other.inverse(); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  std::complex<double> to_complex() const;

  /// Certified enclosure of |x| from interval evaluation at the given
  /// binary precision (>= 32). Exact for rational values.
  RationalInterval magnitude_interval(int precision_bits) const;

  /// Human-readable form, e.g. "1/2 + 3*z8^1".
  std::string to_string() const;

 private:
  void reduce();
  void demote_if_rational();

  long long order_ = 1;
  std::vector<Rational> coords_;
};

}  // namespace maskforge
