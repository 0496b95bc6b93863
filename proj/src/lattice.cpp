#include "maskforge/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "maskforge/error.hpp"

namespace maskforge {

namespace {

long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer matrix overflow");
  return r;
}

long long checked_add(long long a, long long b) {
  long long r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer matrix overflow");
  return r;
}

long long to_ll(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return z.get_si();
}

std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

IntMatrix::IntMatrix(std::size_t dim, std::vector<long long> row_major) : dim_(dim), a_(std::move(row_major)) {
  if (a_.size() != dim_ * dim_) throw MaskError(ErrorKind::DimensionMismatch, "matrix entry count is not dim^2");
}

IntMatrix IntMatrix::identity(std::size_t dim) { return scalar(dim, 1); }

IntMatrix IntMatrix::scalar(std::size_t dim, long long value) {
  std::vector<long long> a(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] = value;
  return IntMatrix(dim, std::move(a));
}

IntMatrix IntMatrix::transpose() const {
  std::vector<long long> a(a_.size());
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) a[j * dim_ + i] = a_[i * dim_ + j];
  return IntMatrix(dim_, std::move(a));
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (o.dim_ != dim_) throw MaskError(ErrorKind::DimensionMismatch, "matrix product dimension mismatch");
  std::vector<long long> a(a_.size(), 0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k)
      for (std::size_t j = 0; j < dim_; ++j)
        a[i * dim_ + j] = checked_add(a[i * dim_ + j], checked_mul(a_[i * dim_ + k], o.a_[k * dim_ + j]));
  return IntMatrix(dim_, std::move(a));
}

IntVec IntMatrix::apply(const IntVec& v) const {
  if (v.size() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "vector length does not match matrix");
  IntVec out(dim_, 0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] = checked_add(out[i], checked_mul(a_[i * dim_ + j], v[j]));
  return out;
}

IntVec IntMatrix::column(std::size_t j) const {
  IntVec c(dim_);
  for (std::size_t i = 0; i < dim_; ++i) c[i] = a_[i * dim_ + j];
  return c;
}

IntMatrix IntMatrix::power(unsigned k) const {
  IntMatrix result = identity(dim_);
  for (unsigned i = 0; i < k; ++i) result = result * *this;
  return result;
}

Integer IntMatrix::determinant() const {
  if (dim_ == 0) return 1;
  // Bareiss fraction-free elimination.
  std::vector<Integer> a(a_.size());
  for (std::size_t i = 0; i < a_.size(); ++i) a[i] = Integer(static_cast<long>(a_[i]));
  const std::size_t n = dim_;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

IntMatrix IntMatrix::adjugate() const {
  const std::size_t n = dim_;
  if (n == 1) return IntMatrix(1, {1});
  std::vector<long long> adj(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // adj(i, j) = (-1)^{i+j} det(minor without row j and column i)
      std::vector<long long> minor;
      minor.reserve((n - 1) * (n - 1));
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) minor.push_back(a_[r * n + c]);
        }
      }
      Integer d = IntMatrix(n - 1, std::move(minor)).determinant();
      if ((i + j) % 2 == 1) d = -d;
      adj[i * n + j] = to_ll(d);
    }
  }
  return IntMatrix(n, std::move(adj));
}

long long IntMatrix::inf_norm() const {
  long long best = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    long long s = 0;
    for (std::size_t j = 0; j < dim_; ++j) s = checked_add(s, std::llabs(a_[i * dim_ + j]));
    best = std::max(best, s);
  }
  return best;
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

RatMatrix::RatMatrix(const IntMatrix& m) : RatMatrix(m.dim(), m.dim()) {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = make_rational(m(i, j));
}

RatMatrix RatMatrix::identity(std::size_t dim) {
  RatMatrix r(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) r(i, i) = 1;
  return r;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw MaskError(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  RatMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    }
  return r;
}

RatMatrix RatMatrix::operator*(const Rational& f) const {
  RatMatrix r = *this;
  for (auto& x : r.a_) x *= f;
  return r;
}

RatVec RatMatrix::apply(const RatVec& v) const {
  if (v.size() != cols_) throw MaskError(ErrorKind::DimensionMismatch, "vector length does not match matrix");
  RatVec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

RatVec RatMatrix::apply(const IntVec& v) const { return apply(to_rat_vec(v)); }

Rational RatMatrix::inf_norm() const {
  Rational best = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += abs((*this)(i, j));
    if (s > best) best = s;
  }
  return best;
}

long long determinant(const IntMatrix& m) { return to_ll(m.determinant()); }

RatMatrix inverse(const IntMatrix& m) {
  const long long det = determinant(m);
  if (det == 0) throw MaskError(ErrorKind::NotDilation, "singular matrix");
  RatMatrix inv(m.adjugate());
  return inv * make_rational(1, det);
}

CosetKey::CosetKey(const IntMatrix& m) : adj_(m.adjugate()), det_(determinant(m)) {
  if (det_ == 0) throw MaskError(ErrorKind::NotDilation, "singular matrix");
  modulus_ = std::llabs(det_);
}

IntVec CosetKey::key(const IntVec& n) const {
  const std::size_t d = adj_.dim();
  IntVec k(d);
  for (std::size_t i = 0; i < d; ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < d; ++j) s += static_cast<__int128>(adj_(i, j)) * n[j];
    __int128 r = s % modulus_;
    if (r < 0) r += modulus_;
    k[i] = static_cast<long long>(r);
  }
  return k;
}

bool CosetKey::congruent(const IntVec& a, const IntVec& b) const { return key(a) == key(b); }

IntVec CosetKey::divide(const IntVec& n) const {
  const std::size_t d = adj_.dim();
  IntVec l(d);
  for (std::size_t i = 0; i < d; ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < d; ++j) s += static_cast<__int128>(adj_(i, j)) * n[j];
    if (s % det_ != 0) throw MaskError(ErrorKind::NonIntegerFrequencies, "vector is not in M Z^d");
    l[i] = static_cast<long long>(s / det_);
  }
  return l;
}

std::vector<IntVec> digit_set(const IntMatrix& m, const std::optional<std::vector<IntVec>>& user_supplied) {
  const CosetKey key(m);
  const auto count = static_cast<std::size_t>(key.index());
  const std::size_t d = m.dim();
  if (user_supplied) {
    const auto& digits = *user_supplied;
    if (digits.size() != count) {
      throw MaskError(ErrorKind::UserDigitsInvalid,
                      "expected " + std::to_string(count) + " digits, got " + std::to_string(digits.size()));
    }
    for (const auto& s : digits) {
      if (s.size() != d) throw MaskError(ErrorKind::UserDigitsInvalid, "digit " + vec_str(s) + " has wrong dimension");
    }
    if (std::any_of(digits.front().begin(), digits.front().end(), [](long long x) { return x != 0; })) {
      throw MaskError(ErrorKind::UserDigitsInvalid, "the first digit must be 0");
    }
    for (std::size_t a = 0; a < digits.size(); ++a)
      for (std::size_t b = a + 1; b < digits.size(); ++b)
        if (key.congruent(digits[a], digits[b])) {
          throw MaskError(ErrorKind::UserDigitsInvalid,
                          "digits " + vec_str(digits[a]) + " and " + vec_str(digits[b]) + " are congruent");
        }
    return digits;
  }

  const long long bound = m.inf_norm();
  std::vector<IntVec> box;
  IntVec p(d, -bound);
  while (true) {
    box.push_back(p);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (p[i] < bound) {
        ++p[i];
        break;
      }
      p[i] = -bound;
      if (i == 0) goto done;
    }
    if (d == 0) break;
  }
done:
  auto max_norm = [](const IntVec& v) {
    long long b = 0;
    for (long long x : v) b = std::max(b, std::llabs(x));
    return b;
  };
  std::stable_sort(box.begin(), box.end(), [&](const IntVec& a, const IntVec& b) {
    const long long na = max_norm(a);
    const long long nb = max_norm(b);
    if (na != nb) return na < nb;
    // coordinates compare as 0, 1, -1, 2, -2, ...
    const auto rank = [](long long x) { return x > 0 ? 2 * x - 1 : -2 * x; };
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](long long x, long long y) { return rank(x) < rank(y); });
  });
  std::vector<IntVec> digits;
  std::vector<IntVec> keys;
  for (const auto& v : box) {
    IntVec k = key.key(v);
    if (std::find(keys.begin(), keys.end(), k) != keys.end()) continue;
    keys.push_back(std::move(k));
    digits.push_back(v);
    if (digits.size() == count) break;
  }
  if (digits.size() != count) throw MaskError(ErrorKind::NotDilation, "digit enumeration incomplete");
  return digits;
}

std::vector<double> eigenvalue_moduli(const IntMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = static_cast<double>(m(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(out.begin(), out.end());
  return out;
}

DilationContext DilationContext::create(const IntMatrix& m, const std::optional<std::vector<IntVec>>& digits,
                                        const std::optional<std::vector<IntVec>>& dual_digits) {
  if (m.dim() == 0) throw MaskError(ErrorKind::NotDilation, "empty matrix");
  const long long det = determinant(m);
  if (det == 0) throw MaskError(ErrorKind::NotDilation, "det M = 0");
  for (double mod : eigenvalue_moduli(m)) {
    if (!(mod > 1.0 + 1e-9)) {
      throw MaskError(ErrorKind::NotDilation, "eigenvalue of modulus " + std::to_string(mod) + " <= 1");
    }
  }
  DilationContext ctx;
  ctx.m_ = m;
  ctx.mt_ = m.transpose();
  ctx.det_ = det;
  ctx.digits_ = digit_set(m, digits);
  ctx.dual_digits_ = digit_set(ctx.mt_, dual_digits);
  ctx.inv_ = maskforge::inverse(m);
  ctx.inv_t_ = ctx.inv_.transpose();
  ctx.key_ = CosetKey(m);
  ctx.dual_key_ = CosetKey(ctx.mt_);
  for (std::size_t k = 0; k < ctx.digits_.size(); ++k) {
    ctx.r_.push_back(ctx.inv_.apply(ctx.digits_[k]));
    ctx.key_to_digit_.emplace_back(ctx.key_.key(ctx.digits_[k]), k);
    ctx.dual_key_to_digit_.emplace_back(ctx.dual_key_.key(ctx.dual_digits_[k]), k);
  }
  std::sort(ctx.key_to_digit_.begin(), ctx.key_to_digit_.end());
  std::sort(ctx.dual_key_to_digit_.begin(), ctx.dual_key_to_digit_.end());
  return ctx;
}

std::size_t DilationContext::coset_index(const IntVec& n, bool dual) const {
  const auto& table = dual ? dual_key_to_digit_ : key_to_digit_;
  const IntVec k = (dual ? dual_key_ : key_).key(n);
  auto it = std::lower_bound(table.begin(), table.end(), k,
                             [](const std::pair<IntVec, std::size_t>& e, const IntVec& v) { return e.first < v; });
  if (it == table.end() || it->first != k) throw MaskError(ErrorKind::InternalIdentityViolation, "coset lookup failed");
  return it->second;
}

IntVec DilationContext::coset_offset(const IntVec& n) const {
  const IntVec& s = digits_[coset_index(n)];
  IntVec diff(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) diff[i] = n[i] - s[i];
  return key_.divide(diff);
}

const char* to_string(Isotropy v) {
  switch (v) {
    case Isotropy::Yes: return "yes";
    case Isotropy::No: return "no";
    case Isotropy::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

IsotropyReport is_isotropic(const IntMatrix& m, int probe_depth) {
  IsotropyReport report;
  report.probe_depth = probe_depth;
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = static_cast<double>(m(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
  for (Eigen::Index i = 0; i < n; ++i) report.eigenvalue_moduli.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(report.eigenvalue_moduli.begin(), report.eigenvalue_moduli.end());

  const double lo = report.eigenvalue_moduli.front();
  const double hi = report.eigenvalue_moduli.back();
  const double tol = 1e-8;
  if (hi - lo > tol * hi) {
    report.verdict = Isotropy::No;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(solver.eigenvectors());
    const auto& sv = svd.singularValues();
    const bool full_rank = sv.size() > 0 && sv(sv.size() - 1) > tol * sv(0);
    report.verdict = full_rank ? Isotropy::Yes : Isotropy::Inconclusive;
  }

  const RatMatrix inv = maskforge::inverse(m);
  RatMatrix fwd = RatMatrix::identity(m.dim());
  RatMatrix back = RatMatrix::identity(m.dim());
  const RatMatrix mr(m);
  report.max_similarity_product = 0;
  for (int k = 1; k <= probe_depth; ++k) {
    fwd = fwd * mr;
    back = back * inv;
    const Rational p = fwd.inf_norm() * back.inf_norm();
    if (p > report.max_similarity_product) report.max_similarity_product = p;
  }
  return report;
}

Rational power_inf_norm(const IntMatrix& m, unsigned power) {
  RatMatrix p = RatMatrix::identity(m.dim());
  const RatMatrix mr(m);
  for (unsigned i = 0; i < power; ++i) p = p * mr;
  return p.inf_norm();
}

}  // namespace maskforge
