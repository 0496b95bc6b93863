#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "maskforge/cyclotomic.hpp"
#include "maskforge/lattice.hpp"
#include "maskforge/multi_index.hpp"
#include "maskforge/rational.hpp"

namespace maskforge {

/// Sparse exponential sum  sum_n c_n e^{2 pi i (n/q, x)}.
///
/// Keys are the integer numerators n; q is the common frequency denominator and
/// is kept minimal. q = 1 for ordinary Laurent polynomials in z_j = e^{2 pi i x_j}.
class TrigPoly {
 public:
  using Terms = std::map<IntVec, Cyclotomic>;

  TrigPoly() = default;
  explicit TrigPoly(std::size_t dim) : dim_(dim) {}
  TrigPoly(std::size_t dim, Terms terms, long long denominator = 1);

  static TrigPoly constant(std::size_t dim, const Cyclotomic& value);
  /// c * z^n (frequency n / denominator).
  static TrigPoly monomial(std::size_t dim, const IntVec& n, const Cyclotomic& c = Cyclotomic(1),
                           long long denominator = 1);
  /// 1 - z^n.
  static TrigPoly one_minus(std::size_t dim, const IntVec& n);

  std::size_t dim() const { return dim_; }
  long long denominator() const { return q_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool has_integer_frequencies() const { return q_ == 1; }
  bool has_rational_coefficients() const;
  /// Coefficient of frequency n / denominator() (zero if absent).
  Cyclotomic coefficient(const IntVec& n) const;

  TrigPoly operator-() const;
  TrigPoly& operator+=(const TrigPoly& other);
  TrigPoly& operator-=(const TrigPoly& other);
  TrigPoly& operator*=(const Cyclotomic& factor);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator*(TrigPoly a, const Cyclotomic& c) { return a *= c; }
  friend TrigPoly operator*(const Cyclotomic& c, TrigPoly a) { return a *= c; }
  friend bool operator==(const TrigPoly& a, const TrigPoly& b);
  friend bool operator!=(const TrigPoly& a, const TrigPoly& b) { return !(a == b); }

  /// sum_i a_i * b_i in one accumulation pass.
  static TrigPoly sum_of_products(const std::vector<std::pair<const TrigPoly*, const TrigPoly*>>& pairs,
                                  std::size_t dim);

  /// Multiply by z^l (integer l; same denominator).
  TrigPoly shifted(const IntVec& l) const;

  /// t(M^* x): frequency n -> M n.
  TrigPoly compose_dilate(const IntMatrix& m) const;
  /// t(M^{*-1} x): frequency n -> M^{-1} n.
  TrigPoly compose_inverse_dilate(const IntMatrix& m) const;

  /// Exact value at a rational point.
  Cyclotomic eval(const RatVec& p) const;
  /// D^alpha t(p) / (2 pi i)^{[alpha]}.
  Cyclotomic normalized_derivative(const MultiIndex& alpha, const RatVec& p) const;

  /// Set z_j := 1. Integer frequencies only.
  TrigPoly substitute_one(std::size_t j) const;
  /// Exact u with u (1 - z_j) = t; NotDivisible otherwise.
  TrigPoly divide_one_minus_z(std::size_t j) const;

  /// Certified enclosure of sum |c_n|; exact for rational coefficients.
  RationalInterval l1_norm(int precision_bits) const;

  std::string to_string() const;

 private:
  void normalize();
  void require_same_dim(const TrigPoly& other) const;
  /// Numerators rescaled to denominator `target` (a multiple of q_).
  Terms terms_over(long long target) const;

  std::size_t dim_ = 0;
  long long q_ = 1;
  Terms terms_;
};

/// tau_nu(x) = sum_n t^(M n + s_nu) e^{2 pi i (n, x)}.
std::vector<TrigPoly> polyphase_split(const TrigPoly& t, const DilationContext& ctx);
/// t(x) = sum_nu e^{2 pi i (s_nu, x)} tau_nu(M^* x).
TrigPoly polyphase_assemble(const std::vector<TrigPoly>& taus, const DilationContext& ctx);

/// c_j(x) = 1 - e^{2 pi i x_j}.
TrigPoly c_poly(std::size_t dim, std::size_t j);
/// delta_j(x) = 1 - e^{2 pi i (M^* x, e_j)} = 1 - z^{M e_j}.
TrigPoly delta_poly(const IntMatrix& m, std::size_t j);

}  // namespace maskforge
