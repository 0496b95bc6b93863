#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maskforge/lattice.hpp"
#include "maskforge/trigpoly.hpp"

namespace maskforge {

/// Rectangular array of symbols; the coefficient matrix A_alpha collects the
/// alpha-th coefficient of every entry.
class MatrixMask {
 public:
  MatrixMask() = default;
  MatrixMask(std::size_t rows, std::size_t cols, std::size_t dim);
  static MatrixMask scalar(const TrigPoly& t);
  static MatrixMask from_grid(const std::vector<std::vector<TrigPoly>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return dim_; }
  TrigPoly& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const TrigPoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  /// Union of the frequency supports of all entries.
  std::vector<IntVec> support() const;
  std::vector<std::vector<Cyclotomic>> coefficient(const IntVec& alpha) const;
  bool has_rational_coefficients() const;

  friend MatrixMask operator*(const MatrixMask& a, const MatrixMask& b);
  friend bool operator==(const MatrixMask&, const MatrixMask&) = default;

  MatrixMask compose_dilate(const IntMatrix& m) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t dim_ = 0;
  std::vector<TrigPoly> entries_;
};

/// Finitely supported sequence Z^d -> Q^width. Zero vectors are not stored.
struct Sequence {
  std::size_t dim = 0;
  std::size_t width = 1;
  std::map<IntVec, RatVec> values;

  static Sequence delta(std::size_t dim, std::size_t width, const IntVec& at, std::size_t component = 0);
  RatVec at(const IntVec& alpha) const;
  void add(const IntVec& alpha, std::size_t component, const Rational& v);
  void prune();
  Rational sup_norm() const;

  friend Sequence operator+(const Sequence& a, const Sequence& b);
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

/// (S_T f)_alpha = sum_beta A_{alpha - M beta} f_beta. Rational coefficients only.
Sequence apply(const MatrixMask& mask, const IntMatrix& dilation, const Sequence& f);

/// Backward differences; component i, direction j lands at index i d + j.
Sequence gradient(const Sequence& f);

/// max over cosets nu of M and rows i of sum_j sum_beta |A_{s_nu + M beta}(i, j)|.
RationalInterval operator_norm(const MatrixMask& mask, const IntMatrix& dilation, int precision_bits);

/// sums[nu] = sum_beta A_{s_nu + M beta}.
std::vector<std::vector<std::vector<Cyclotomic>>> coset_sums(const MatrixMask& mask, const DilationContext& ctx);

/// Symbol of S_T^k: T(x) T(M^* x) ... T(M^{*(k-1)} x), with dilation M^k.
MatrixMask power_symbol(const MatrixMask& mask, const IntMatrix& dilation, unsigned k);

/// Difference mask T with T_kj = t_jk from algorithm1 (t in Z^0).
MatrixMask difference_mask(const TrigPoly& t, const DilationContext& ctx);
/// Second difference mask Q, Q_{(k,p),(j,q)} = [T_kj]_{qp}; entries of T must be in Z^0.
MatrixMask second_difference_mask(const MatrixMask& T, const DilationContext& ctx);

enum class Verdict { Convergent, C1, Inconclusive };
const char* to_string(Verdict v);

struct NormStep {
  unsigned L = 0;
  RationalInterval value;  // ||S^L|| or ||M^{*L}|| ||S_Q^L||
  bool below_one = false;
};

struct ConvergenceReport {
  Cyclotomic t0;
  bool normalized = false;  // t(0) = m
  bool in_z0 = false;
  std::optional<MatrixMask> T;
  std::vector<NormStep> trajectory;
  std::optional<unsigned> certificate;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> reasons;
};

struct SmoothnessReport {
  IsotropyReport isotropy;
  bool in_z1 = false;
  bool normalized = false;
  ConvergenceReport convergence;
  std::optional<MatrixMask> T;
  std::optional<MatrixMask> Q;
  std::vector<NormStep> trajectory;
  std::optional<unsigned> certificate;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> reasons;
};

/// Sufficient condition for uniform convergence: t(0) = m, t in Z^0 and
/// ||S_T^L|| < 1 for some L <= L_max (certified).
ConvergenceReport check_convergence(const TrigPoly& t, const DilationContext& ctx, unsigned l_max = 8,
                                    int precision_bits = default_precision_bits());

/// Sufficient condition for C^1: isotropic M, t in Z^1, t(0) = m, convergence,
/// and ||M^{*L}|| ||S_Q^L|| < 1 for some L <= L_max.
SmoothnessReport check_c1(const TrigPoly& t, const DilationContext& ctx, unsigned l_max = 8,
                          int precision_bits = default_precision_bits());

struct RefinedSample {
  RatVec point;  // M^{-rounds} alpha
  RatVec value;
};

/// S_t^rounds f, each value placed at M^{-rounds} alpha.
std::vector<RefinedSample> refine(const TrigPoly& t, const DilationContext& ctx, const Sequence& f, unsigned rounds);

}  // namespace maskforge
