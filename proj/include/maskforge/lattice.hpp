#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "maskforge/rational.hpp"

namespace maskforge {

/// Square integer matrix, row-major. Products check for overflow.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t dim, std::vector<long long> row_major);

  static IntMatrix identity(std::size_t dim);
  static IntMatrix scalar(std::size_t dim, long long value);

  std::size_t dim() const { return dim_; }
  long long operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  const std::vector<long long>& row_major() const { return a_; }

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntVec apply(const IntVec& v) const;
  IntVec column(std::size_t j) const;
  IntMatrix power(unsigned k) const;

  /// Exact determinant (fraction-free elimination).
  Integer determinant() const;
  IntMatrix adjugate() const;
  /// Max absolute row sum.
  long long inf_norm() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<long long> a_;
};

/// Dense rational matrix, row-major.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  explicit RatMatrix(const IntMatrix& m);

  static RatMatrix identity(std::size_t dim);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RatMatrix transpose() const;
  RatMatrix operator*(const RatMatrix& other) const;
  RatMatrix operator*(const Rational& factor) const;
  RatVec apply(const RatVec& v) const;
  RatVec apply(const IntVec& v) const;
  Rational inf_norm() const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

long long determinant(const IntMatrix& m);
RatMatrix inverse(const IntMatrix& m);

/// Classifies lattice points modulo M Z^d: n and n' are congruent iff their
/// keys agree, where key(n) = adj(M) n mod |det M| componentwise.
class CosetKey {
 public:
  CosetKey() = default;
  explicit CosetKey(const IntMatrix& m);

  IntVec key(const IntVec& n) const;
  bool congruent(const IntVec& a, const IntVec& b) const;
  /// Solves n = M l for l; requires n congruent to 0.
  IntVec divide(const IntVec& n) const;
  long long index() const { return modulus_; }

 private:
  IntMatrix adj_;
  long long det_ = 1;
  long long modulus_ = 1;
};

/// Canonical digits: first representative of each coset among integer points of
/// the box [-|M|_inf, |M|_inf]^d, ordered by max-norm then lexicographically.
/// A supplied list is validated instead (UserDigitsInvalid on failure).
std::vector<IntVec> digit_set(const IntMatrix& m, const std::optional<std::vector<IntVec>>& user_supplied = std::nullopt);

/// Dilation matrix with digit sets for M and M^T and the points r_k = M^{-1} s_k.
class DilationContext {
 public:
  /// Throws NotDilation if det M = 0 or some eigenvalue has modulus <= 1 + 1e-9.
  static DilationContext create(const IntMatrix& m,
                                const std::optional<std::vector<IntVec>>& digits = std::nullopt,
                                const std::optional<std::vector<IntVec>>& dual_digits = std::nullopt);

  std::size_t dim() const { return m_.dim(); }
  const IntMatrix& matrix() const { return m_; }
  const IntMatrix& dual_matrix() const { return mt_; }
  long long det() const { return det_; }
  std::size_t m() const { return digits_.size(); }
  const std::vector<IntVec>& digits() const { return digits_; }
  const std::vector<IntVec>& dual_digits() const { return dual_digits_; }
  const RatVec& r(std::size_t k) const { return r_[k]; }
  const RatMatrix& inverse() const { return inv_; }
  /// (M^*)^{-1} = (M^{-1})^T.
  const RatMatrix& dual_inverse() const { return inv_t_; }

  /// Unique nu with n = s_nu (mod M), or (mod M^T) when dual.
  std::size_t coset_index(const IntVec& n, bool dual = false) const;
  /// The l with n = s_nu + M l for nu = coset_index(n).
  IntVec coset_offset(const IntVec& n) const;
  const CosetKey& coset_key(bool dual = false) const { return dual ? dual_key_ : key_; }

 private:
  IntMatrix m_;
  IntMatrix mt_;
  long long det_ = 1;
  std::vector<IntVec> digits_;
  std::vector<IntVec> dual_digits_;
  std::vector<RatVec> r_;
  RatMatrix inv_;
  RatMatrix inv_t_;
  CosetKey key_;
  CosetKey dual_key_;
  std::vector<std::pair<IntVec, std::size_t>> key_to_digit_;
  std::vector<std::pair<IntVec, std::size_t>> dual_key_to_digit_;
};

enum class Isotropy { Yes, No, Inconclusive };
const char* to_string(Isotropy v);

struct IsotropyReport {
  Isotropy verdict = Isotropy::Inconclusive;
  std::vector<double> eigenvalue_moduli;
  /// max_{1<=k<=K} |M^k|_inf |M^{-k}|_inf, computed exactly.
  Rational max_similarity_product;
  int probe_depth = 0;
};

/// Eigenvalue test for isotropy plus a finite probe of the similarity bound.
IsotropyReport is_isotropic(const IntMatrix& m, int probe_depth = 8);

/// |M^L|_inf, exact.
Rational power_inf_norm(const IntMatrix& m, unsigned power);

/// Moduli of the eigenvalues (floating point).
std::vector<double> eigenvalue_moduli(const IntMatrix& m);

}  // namespace maskforge
