#include "maskforge/subdivision.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <unordered_map>

#include "maskforge/decompose.hpp"
#include "maskforge/error.hpp"
#include "maskforge/zerocond.hpp"

namespace maskforge {

namespace {

/// Frequencies packed into one 64-bit word, 63/d bits per coordinate.
class KeyPacker {
 public:
  struct Overflow {};

  explicit KeyPacker(std::size_t dim) : dim_(dim), bits_(dim == 0 ? 0 : 63 / static_cast<int>(dim)) {
    bias_ = bits_ == 0 ? 0 : (1LL << (bits_ - 1));
  }

  std::uint64_t pack(const IntVec& n) const {
    std::uint64_t out = 0;
    for (std::size_t r = 0; r < dim_; ++r) {
      const long long v = n[r] + bias_;
      if (n[r] < -bias_ || n[r] >= bias_) throw Overflow{};
      out |= static_cast<std::uint64_t>(v) << (bits_ * static_cast<int>(r));
    }
    return out;
  }

  IntVec unpack(std::uint64_t k) const {
    IntVec n(dim_);
    const std::uint64_t mask = (1ULL << bits_) - 1;
    for (std::size_t r = 0; r < dim_; ++r)
      n[r] = static_cast<long long>((k >> (bits_ * static_cast<int>(r))) & mask) - bias_;
    return n;
  }

  // Sum of packed keys is the packed sum; the bound check guards the carry.
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    return a + b - bias_word();
  }

  long long bound() const { return bias_; }

 private:
  std::uint64_t bias_word() const {
    std::uint64_t w = 0;
    for (std::size_t r = 0; r < dim_; ++r) w |= static_cast<std::uint64_t>(bias_) << (bits_ * static_cast<int>(r));
    return w;
  }

  std::size_t dim_;
  int bits_;
  long long bias_ = 0;
};

using Wide = __int128;
using Term = std::pair<std::uint64_t, Wide>;
/// Terms sorted by packed key; no zero values.
using TermList = std::vector<Term>;

Wide to_wide(const Integer& v) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) throw KeyPacker::Overflow{};
  return static_cast<Wide>(mpz_get_si(v.get_mpz_t()));
}

Integer from_wide(Wide v) {
  const bool neg = v < 0;
  const unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Integer out = (hi << 64) + lo;
  return neg ? Integer(-out) : out;
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Rational matrix symbol as integer numerators over one denominator; used for
/// the long power products where per-term rationals would dominate the cost.
struct ScaledMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t dim = 0;
  Wide den = 1;
  std::vector<TermList> e;
  long long extent = 0;  // max |coordinate| over all keys

  TermList& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  const TermList& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
};

long long max_abs(const IntVec& n) {
  long long m = 0;
  for (long long x : n) m = std::max(m, x < 0 ? -x : x);
  return m;
}

ScaledMatrix scaled_from(const MatrixMask& mask, const KeyPacker& pk) {
  ScaledMatrix s{mask.rows(), mask.cols(), mask.dim(), 1, std::vector<TermList>(mask.rows() * mask.cols()), 0};
  Integer den = 1;
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      for (const auto& [n, c] : mask(i, j).terms()) den = lcm(den, c.rational_value().get_den());
  s.den = to_wide(den);
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j) {
      TermList& list = s.at(i, j);
      for (const auto& [n, c] : mask(i, j).terms()) {
        const Rational& v = c.rational_value();
        list.emplace_back(pk.pack(n), to_wide(Integer(v.get_num() * (den / v.get_den()))));
        s.extent = std::max(s.extent, max_abs(n));
      }
      std::sort(list.begin(), list.end());
    }
  return s;
}

ScaledMatrix scaled_dilate(const ScaledMatrix& a, const IntMatrix& m, const KeyPacker& pk) {
  ScaledMatrix out{a.rows, a.cols, a.dim, a.den, std::vector<TermList>(a.e.size()), 0};
  for (std::size_t i = 0; i < a.e.size(); ++i) {
    for (const auto& [k, c] : a.e[i]) {
      const IntVec n = m.apply(pk.unpack(k));
      out.e[i].emplace_back(pk.pack(n), c);
      out.extent = std::max(out.extent, max_abs(n));
    }
    std::sort(out.e[i].begin(), out.e[i].end());
  }
  return out;
}

/// Sum of shifted, scaled copies of sorted lists, by k-way merge.
struct Stream {
  const TermList* list;
  std::uint64_t shift;
  Wide scale;
  std::size_t pos;
};

ScaledMatrix scaled_product(const ScaledMatrix& a, const ScaledMatrix& b, const KeyPacker& pk) {
  if (a.extent + b.extent >= pk.bound()) throw KeyPacker::Overflow{};
  Wide den = 0;
  if (__builtin_mul_overflow(a.den, b.den, &den)) throw KeyPacker::Overflow{};
  ScaledMatrix out{a.rows, b.cols, a.dim, den, std::vector<TermList>(a.rows * b.cols), a.extent + b.extent};
  std::vector<Stream> streams;
  std::vector<std::pair<std::uint64_t, std::size_t>> heap;
  const auto later = [](const auto& x, const auto& y) { return x.first > y.first; };
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      streams.clear();
      heap.clear();
      std::size_t total = 0;
      for (std::size_t k = 0; k < a.cols; ++k)
        for (const auto& [ky, cy] : b.at(k, j))
          if (!a.at(i, k).empty()) {
            streams.push_back({&a.at(i, k), ky, cy, 0});
            total += a.at(i, k).size();
          }
      for (std::size_t s = 0; s < streams.size(); ++s) heap.emplace_back(pk.add((*streams[s].list)[0].first, streams[s].shift), s);
      std::make_heap(heap.begin(), heap.end(), later);
      TermList& acc = out.at(i, j);
      acc.reserve(total / 2 + 1);
      Wide tmp = 0;
      while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), later);
        auto [key, s] = heap.back();
        Stream& st = streams[s];
        if (__builtin_mul_overflow((*st.list)[st.pos].second, st.scale, &tmp)) throw KeyPacker::Overflow{};
        if (!acc.empty() && acc.back().first == key) {
          if (__builtin_add_overflow(acc.back().second, tmp, &acc.back().second)) throw KeyPacker::Overflow{};
        } else {
          if (!acc.empty() && acc.back().second == 0) acc.pop_back();
          acc.emplace_back(key, tmp);
        }
        if (++st.pos < st.list->size()) {
          heap.back().first = pk.add((*st.list)[st.pos].first, st.shift);
          std::push_heap(heap.begin(), heap.end(), later);
        } else {
          heap.pop_back();
        }
      }
      if (!acc.empty() && acc.back().second == 0) acc.pop_back();
    }
  // Keep numbers small: divide out the common content.
  Wide g = out.den;
  for (const auto& list : out.e)
    for (const auto& [k, c] : list) {
      g = wide_gcd(g, c);
      if (g == 1) return out;
    }
  out.den /= g;
  for (auto& list : out.e)
    for (auto& [k, c] : list) c /= g;
  return out;
}

Rational scaled_norm(const ScaledMatrix& a, const IntMatrix& dilation, const KeyPacker& pk) {
  const CosetKey key(dilation);
  std::map<IntVec, std::vector<Wide>> rows;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      for (const auto& [k, c] : a.at(i, j)) {
        auto it = rows.find(key.key(pk.unpack(k)));
        if (it == rows.end()) it = rows.emplace(key.key(pk.unpack(k)), std::vector<Wide>(a.rows)).first;
        Wide& slot = it->second[i];
        if (__builtin_add_overflow(slot, c < 0 ? -c : c, &slot)) throw KeyPacker::Overflow{};
      }
  Wide best = 0;
  for (const auto& [k, sums] : rows)
    for (const auto& v : sums) best = std::max(best, v);
  Rational r(from_wide(best), from_wide(a.den));
  r.canonicalize();
  return r;
}

MatrixMask mask_from_scaled(const ScaledMatrix& a, const KeyPacker& pk) {
  MatrixMask out(a.rows, a.cols, a.dim);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      TrigPoly::Terms terms;
      for (const auto& [k, c] : a.at(i, j)) {
        Rational v(from_wide(c), from_wide(a.den));
        v.canonicalize();
        terms.emplace(pk.unpack(k), Cyclotomic(v));
      }
      out(i, j) = TrigPoly(a.dim, std::move(terms));
    }
  return out;
}

/// ||S^L|| for L = 1..l_max, with dilation M^L at step L.
std::vector<RationalInterval> power_norms(const MatrixMask& mask, const IntMatrix& dilation, unsigned l_max,
                                          int precision_bits) {
  std::vector<RationalInterval> norms;
  IntMatrix dil = dilation;
  unsigned done = 0;
  if (mask.has_rational_coefficients()) {
    const KeyPacker pk(mask.dim());
    try {
      const ScaledMatrix base = scaled_from(mask, pk);
      ScaledMatrix power = base;
      for (unsigned L = 1; L <= l_max; ++L) {
        if (L > 1) {
          power = scaled_product(power, scaled_dilate(base, dil, pk), pk);
          dil = dil * dilation;
        }
        norms.push_back(RationalInterval::exact(scaled_norm(power, dil, pk)));
        done = L;
      }
      return norms;
    } catch (const KeyPacker::Overflow&) {
      // Frequencies too wide to pack: continue on the general path.
    }
  }
  MatrixMask power = mask;
  dil = dilation;
  for (unsigned L = 1; L <= l_max; ++L) {
    if (L > 1) {
      power = power * mask.compose_dilate(dil);
      dil = dil * dilation;
    }
    if (L <= done) continue;
    norms.push_back(operator_norm(power, dil, precision_bits));
  }
  return norms;
}

}  // namespace

MatrixMask::MatrixMask(std::size_t rows, std::size_t cols, std::size_t dim)
    : rows_(rows), cols_(cols), dim_(dim), entries_(rows * cols, TrigPoly(dim)) {}

MatrixMask MatrixMask::scalar(const TrigPoly& t) {
  MatrixMask m(1, 1, t.dim());
  m(0, 0) = t;
  return m;
}

MatrixMask MatrixMask::from_grid(const std::vector<std::vector<TrigPoly>>& rows) {
  if (rows.empty() || rows.front().empty()) throw MaskError(ErrorKind::ShapeMismatch, "empty matrix mask");
  MatrixMask m(rows.size(), rows.front().size(), rows.front().front().dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw MaskError(ErrorKind::ShapeMismatch, "ragged matrix mask");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<IntVec> MatrixMask::support() const {
  std::set<IntVec> s;
  for (const auto& e : entries_)
    for (const auto& [n, c] : e.terms()) s.insert(n);
  return {s.begin(), s.end()};
}

std::vector<std::vector<Cyclotomic>> MatrixMask::coefficient(const IntVec& alpha) const {
  std::vector<std::vector<Cyclotomic>> a(rows_, std::vector<Cyclotomic>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) a[i][j] = (*this)(i, j).coefficient(alpha);
  return a;
}

bool MatrixMask::has_rational_coefficients() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const TrigPoly& e) {
    return e.has_integer_frequencies() && e.has_rational_coefficients();
  });
}

MatrixMask operator*(const MatrixMask& a, const MatrixMask& b) {
  if (a.cols_ != b.rows_ || a.dim_ != b.dim_) throw MaskError(ErrorKind::ShapeMismatch, "matrix mask product shape mismatch");
  MatrixMask out(a.rows_, b.cols_, a.dim_);
  std::vector<std::pair<const TrigPoly*, const TrigPoly*>> pairs;
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      pairs.clear();
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) pairs.emplace_back(&a(i, k), &b(k, j));
      if (!pairs.empty()) out(i, j) = TrigPoly::sum_of_products(pairs, a.dim_);
    }
  return out;
}

MatrixMask MatrixMask::compose_dilate(const IntMatrix& m) const {
  MatrixMask out = *this;
  for (auto& e : out.entries_) e = e.compose_dilate(m);
  return out;
}

Sequence Sequence::delta(std::size_t dim, std::size_t width, const IntVec& at, std::size_t component) {
  Sequence f;
  f.dim = dim;
  f.width = width;
  f.add(at, component, 1);
  return f;
}

RatVec Sequence::at(const IntVec& alpha) const {
  auto it = values.find(alpha);
  return it == values.end() ? RatVec(width) : it->second;
}

void Sequence::add(const IntVec& alpha, std::size_t component, const Rational& v) {
  if (v == 0) return;
  auto [it, inserted] = values.try_emplace(alpha, RatVec(width));
  it->second[component] += v;
}

void Sequence::prune() {
  for (auto it = values.begin(); it != values.end();) {
    if (std::all_of(it->second.begin(), it->second.end(), [](const Rational& x) { return x == 0; })) {
      it = values.erase(it);
    } else {
      ++it;
    }
  }
}

Rational Sequence::sup_norm() const {
  Rational best = 0;
  for (const auto& [alpha, v] : values)
    for (const auto& x : v)
      if (abs(x) > best) best = abs(x);
  return best;
}

Sequence operator+(const Sequence& a, const Sequence& b) {
  if (a.dim != b.dim || a.width != b.width) throw MaskError(ErrorKind::ShapeMismatch, "sequence shapes differ");
  Sequence out = a;
  for (const auto& [alpha, v] : b.values)
    for (std::size_t i = 0; i < v.size(); ++i) out.add(alpha, i, v[i]);
  out.prune();
  return out;
}

Sequence apply(const MatrixMask& mask, const IntMatrix& dilation, const Sequence& f) {
  if (f.width != mask.cols()) throw MaskError(ErrorKind::ShapeMismatch, "sequence width does not match mask columns");
  if (f.dim != mask.dim() || dilation.dim() != mask.dim()) throw MaskError(ErrorKind::ShapeMismatch, "dimension mismatch");
  if (!mask.has_rational_coefficients()) throw MaskError(ErrorKind::ShapeMismatch, "apply needs rational mask coefficients");
  Sequence out;
  out.dim = f.dim;
  out.width = mask.rows();
  for (const auto& [beta, fb] : f.values) {
    const IntVec shift = dilation.apply(beta);
    for (std::size_t i = 0; i < mask.rows(); ++i)
      for (std::size_t j = 0; j < mask.cols(); ++j) {
        if (fb[j] == 0) continue;
        for (const auto& [gamma, c] : mask(i, j).terms()) {
          IntVec alpha = gamma;
          for (std::size_t r = 0; r < alpha.size(); ++r) alpha[r] += shift[r];
          out.add(alpha, i, c.rational_value() * fb[j]);
        }
      }
  }
  out.prune();
  return out;
}

Sequence gradient(const Sequence& f) {
  const std::size_t d = f.dim;
  Sequence out;
  out.dim = d;
  out.width = f.width * d;
  for (const auto& [alpha, v] : f.values) {
    for (std::size_t j = 0; j < d; ++j) {
      IntVec next = alpha;
      next[j] += 1;
      for (std::size_t i = 0; i < f.width; ++i) {
        // f_alpha enters (grad f)_alpha with + and (grad f)_{alpha + e_j} with -.
        out.add(alpha, i * d + j, v[i]);
        out.add(next, i * d + j, -v[i]);
      }
    }
  }
  out.prune();
  return out;
}

RationalInterval operator_norm(const MatrixMask& mask, const IntMatrix& dilation, int precision_bits) {
  const CosetKey key(dilation);
  std::map<IntVec, std::vector<RationalInterval>> rows;
  for (std::size_t i = 0; i < mask.rows(); ++i)
    for (std::size_t j = 0; j < mask.cols(); ++j)
      for (const auto& [alpha, c] : mask(i, j).terms()) {
        auto [it, inserted] = rows.try_emplace(key.key(alpha), std::vector<RationalInterval>(mask.rows(), {0, 0}));
        if (c.is_rational()) {
          const Rational v = abs(c.rational_value());
          it->second[i].lo += v;
          it->second[i].hi += v;
        } else {
          it->second[i] += c.magnitude_interval(precision_bits);
        }
      }
  RationalInterval best{0, 0};
  for (const auto& [k, sums] : rows)
    for (const auto& s : sums) best = max(best, s);
  return best;
}

std::vector<std::vector<std::vector<Cyclotomic>>> coset_sums(const MatrixMask& mask, const DilationContext& ctx) {
  std::vector<std::vector<std::vector<Cyclotomic>>> sums(
      ctx.m(), std::vector<std::vector<Cyclotomic>>(mask.rows(), std::vector<Cyclotomic>(mask.cols())));
  for (std::size_t i = 0; i < mask.rows(); ++i)
    for (std::size_t j = 0; j < mask.cols(); ++j)
      for (const auto& [alpha, c] : mask(i, j).terms()) sums[ctx.coset_index(alpha)][i][j] += c;
  return sums;
}

MatrixMask power_symbol(const MatrixMask& mask, const IntMatrix& dilation, unsigned k) {
  if (mask.rows() != mask.cols()) throw MaskError(ErrorKind::ShapeMismatch, "power symbol needs a square mask");
  if (k == 0) {
    MatrixMask id(mask.rows(), mask.cols(), mask.dim());
    for (std::size_t i = 0; i < mask.rows(); ++i) id(i, i) = TrigPoly::constant(mask.dim(), 1);
    return id;
  }
  IntMatrix dil = dilation;
  if (mask.has_rational_coefficients()) {
    const KeyPacker pk(mask.dim());
    try {
      const ScaledMatrix base = scaled_from(mask, pk);
      ScaledMatrix p = base;
      for (unsigned i = 1; i < k; ++i) {
        p = scaled_product(p, scaled_dilate(base, dil, pk), pk);
        dil = dil * dilation;
      }
      return mask_from_scaled(p, pk);
    } catch (const KeyPacker::Overflow&) {
      dil = dilation;
    }
  }
  MatrixMask p = mask;
  for (unsigned i = 1; i < k; ++i) {
    p = p * mask.compose_dilate(dil);
    dil = dil * dilation;
  }
  return p;
}

MatrixMask difference_mask(const TrigPoly& t, const DilationContext& ctx) {
  const MaskDecomposition dec = algorithm1(t, ctx);
  const std::size_t d = ctx.dim();
  MatrixMask T(d, d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) T(k, j) = dec.entries[j][k];
  return T;
}

MatrixMask second_difference_mask(const MatrixMask& T, const DilationContext& ctx) {
  const std::size_t d = ctx.dim();
  if (T.rows() != d || T.cols() != d) throw MaskError(ErrorKind::ShapeMismatch, "difference mask must be d x d");
  MatrixMask Q(d * d, d * d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) {
      const MaskDecomposition dec = algorithm1(T(k, j), ctx);
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) Q(k * d + p, j * d + q) = dec.entries[q][p];
    }
  return Q;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "convergent";
    case Verdict::C1: return "C1";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ConvergenceReport check_convergence(const TrigPoly& t, const DilationContext& ctx, unsigned l_max, int precision_bits) {
  ConvergenceReport r;
  r.t0 = t.eval(RatVec(ctx.dim(), 0));
  r.normalized = r.t0 == Cyclotomic(static_cast<long long>(ctx.m()));
  r.in_z0 = zero_condition_order(t, ctx, 0) >= 0;
  if (!r.normalized) r.reasons.emplace_back("normalization failed: t(0) != m");
  if (!r.in_z0) {
    r.reasons.emplace_back("mask is not in Z^0");
    return r;
  }
  r.T = difference_mask(t, ctx);
  const auto norms = power_norms(*r.T, ctx.matrix(), l_max, precision_bits);
  for (unsigned L = 1; L <= l_max; ++L) {
    NormStep step{L, norms[L - 1], false};
    step.below_one = step.value.certainly_below(1);
    if (step.below_one && !r.certificate) r.certificate = L;
    r.trajectory.push_back(std::move(step));
  }
  if (!r.certificate) r.reasons.emplace_back("no L <= " + std::to_string(l_max) + " with ||S_T^L|| < 1");
  if (r.normalized && r.certificate) r.verdict = Verdict::Convergent;
  return r;
}

SmoothnessReport check_c1(const TrigPoly& t, const DilationContext& ctx, unsigned l_max, int precision_bits) {
  SmoothnessReport r;
  r.isotropy = is_isotropic(ctx.matrix());
  r.convergence = check_convergence(t, ctx, l_max, precision_bits);
  r.normalized = r.convergence.normalized;
  r.in_z1 = r.convergence.in_z0 && zero_condition_order(t, ctx, 1) >= 1;
  if (r.isotropy.verdict != Isotropy::Yes) {
    r.reasons.emplace_back(std::string("M not isotropic (eigenvalue test: ") + to_string(r.isotropy.verdict) + ")");
  }
  if (!r.in_z1) r.reasons.emplace_back("mask is not in Z^1");
  if (!r.normalized) r.reasons.emplace_back("normalization failed: t(0) != m");
  if (r.convergence.verdict != Verdict::Convergent) r.reasons.emplace_back("convergence not certified");
  if (r.in_z1) {
    r.T = r.convergence.T;
    r.Q = second_difference_mask(*r.T, ctx);
    const IntMatrix mt = ctx.dual_matrix();
    const auto norms = power_norms(*r.Q, ctx.matrix(), l_max, precision_bits);
    for (unsigned L = 1; L <= l_max; ++L) {
      NormStep step{L, scale(norms[L - 1], power_inf_norm(mt, L)), false};
      step.below_one = step.value.certainly_below(1);
      if (step.below_one && !r.certificate) r.certificate = L;
      r.trajectory.push_back(std::move(step));
    }
    if (!r.certificate) r.reasons.emplace_back("no L <= " + std::to_string(l_max) + " with ||M*^L|| ||S_Q^L|| < 1");
  }
  if (r.reasons.empty()) r.verdict = Verdict::C1;
  return r;
}

std::vector<RefinedSample> refine(const TrigPoly& t, const DilationContext& ctx, const Sequence& f, unsigned rounds) {
  const MatrixMask mask = MatrixMask::scalar(t);
  Sequence cur = f;
  for (unsigned i = 0; i < rounds; ++i) cur = apply(mask, ctx.matrix(), cur);
  RatMatrix inv = RatMatrix::identity(ctx.dim());
  for (unsigned i = 0; i < rounds; ++i) inv = inv * ctx.inverse();
  std::vector<RefinedSample> out;
  out.reserve(cur.values.size());
  for (const auto& [alpha, v] : cur.values) out.push_back({inv.apply(alpha), v});
  return out;
}

}  // namespace maskforge
