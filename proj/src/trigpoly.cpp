#include "maskforge/trigpoly.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "maskforge/error.hpp"

namespace maskforge {

TrigPoly::TrigPoly(std::size_t dim, Terms terms, long long denominator)
    : dim_(dim), q_(denominator), terms_(std::move(terms)) {
  if (q_ < 1) throw MaskError(ErrorKind::DimensionMismatch, "frequency denominator must be positive");
  for (const auto& [n, c] : terms_) {
    if (n.size() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "frequency has wrong dimension");
  }
  normalize();
}

TrigPoly TrigPoly::constant(std::size_t dim, const Cyclotomic& value) {
  return monomial(dim, IntVec(dim, 0), value);
}

TrigPoly TrigPoly::monomial(std::size_t dim, const IntVec& n, const Cyclotomic& c, long long denominator) {
  Terms t;
  t.emplace(n, c);
  return TrigPoly(dim, std::move(t), denominator);
}

TrigPoly TrigPoly::one_minus(std::size_t dim, const IntVec& n) {
  return constant(dim, 1) - monomial(dim, n);
}

bool TrigPoly::has_rational_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& e) { return e.second.is_rational(); });
}

Cyclotomic TrigPoly::coefficient(const IntVec& n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? Cyclotomic() : it->second;
}

void TrigPoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero()) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  if (q_ == 1) return;
  long long g = q_;
  for (const auto& [n, c] : terms_) {
    for (long long x : n) g = gcd_ll(g, x);
    if (g == 1) return;
  }
  if (terms_.empty()) g = q_;
  Terms reduced;
  for (auto& [n, c] : terms_) {
    IntVec k = n;
    for (auto& x : k) x /= g;
    reduced.emplace(std::move(k), std::move(c));
  }
  terms_ = std::move(reduced);
  q_ /= g;
}

void TrigPoly::require_same_dim(const TrigPoly& other) const {
  if (dim_ != other.dim_) throw MaskError(ErrorKind::DimensionMismatch, "trigonometric polynomials of different dimension");
}

TrigPoly::Terms TrigPoly::terms_over(long long target) const {
  if (target == q_) return terms_;
  const long long f = target / q_;
  Terms out;
  for (const auto& [n, c] : terms_) {
    IntVec k = n;
    for (auto& x : k) x *= f;
    out.emplace(std::move(k), c);
  }
  return out;
}

TrigPoly TrigPoly::operator-() const {
  TrigPoly r = *this;
  for (auto& [n, c] : r.terms_) c = -c;
  return r;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
  require_same_dim(other);
  if (other.terms_.empty()) return *this;
  const long long l = lcm_ll(q_, other.q_);
  if (l != q_) {
    terms_ = terms_over(l);
    q_ = l;
  }
  const Terms& src = other.q_ == l ? other.terms_ : other.terms_over(l);
  for (const auto& [n, c] : src) {
    auto [it, inserted] = terms_.try_emplace(n, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  normalize();
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& other) { return *this += -other; }

TrigPoly& TrigPoly::operator*=(const Cyclotomic& factor) {
  if (factor.is_zero()) {
    terms_.clear();
    q_ = 1;
    return *this;
  }
  for (auto& [n, c] : terms_) c *= factor;
  return *this;
}

namespace {

struct IntVecHash {
  std::size_t operator()(const IntVec& v) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (long long x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

/// Integer numerators over one common denominator.
struct ScaledTerms {
  Integer denominator = 1;
  std::vector<std::pair<IntVec, Integer>> terms;
};

ScaledTerms scaled(const TrigPoly::Terms& terms) {
  ScaledTerms out;
  for (const auto& [n, c] : terms) out.denominator = lcm(out.denominator, c.rational_value().get_den());
  out.terms.reserve(terms.size());
  for (const auto& [n, c] : terms) {
    const Rational& v = c.rational_value();
    out.terms.emplace_back(n, v.get_num() * (out.denominator / v.get_den()));
  }
  return out;
}

}  // namespace

TrigPoly TrigPoly::sum_of_products(const std::vector<std::pair<const TrigPoly*, const TrigPoly*>>& pairs,
                                   std::size_t dim) {
  long long l = 1;
  bool rational = true;
  for (const auto& [a, b] : pairs) {
    if (a->dim_ != dim || b->dim_ != dim) throw MaskError(ErrorKind::DimensionMismatch, "trigonometric polynomials of different dimension");
    l = lcm_ll(l, lcm_ll(a->q_, b->q_));
    rational = rational && a->has_rational_coefficients() && b->has_rational_coefficients();
  }
  IntVec k(dim);
  if (rational) {
    // Integer numerators over a common denominator: no gcd per term.
    std::vector<std::pair<ScaledTerms, ScaledTerms>> scaled_pairs;
    Integer den = 1;
    for (const auto& [a, b] : pairs) {
      scaled_pairs.emplace_back(scaled(a->q_ == l ? a->terms_ : a->terms_over(l)),
                                scaled(b->q_ == l ? b->terms_ : b->terms_over(l)));
      den = lcm(den, scaled_pairs.back().first.denominator * scaled_pairs.back().second.denominator);
    }
    std::unordered_map<IntVec, Integer, IntVecHash> acc;
    Integer tmp;
    for (const auto& [sa, sb] : scaled_pairs) {
      const Integer factor = den / (sa.denominator * sb.denominator);
      for (const auto& [na, ca] : sa.terms) {
        for (const auto& [nb, cb] : sb.terms) {
          for (std::size_t i = 0; i < dim; ++i) k[i] = na[i] + nb[i];
          mpz_mul(tmp.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
          if (factor != 1) tmp *= factor;
          acc[k] += tmp;
        }
      }
    }
    Terms out;
    for (auto& [n, num] : acc) {
      if (num == 0) continue;
      Rational v(num, den);
      v.canonicalize();
      out.emplace(n, Cyclotomic(v));
    }
    return TrigPoly(dim, std::move(out), l);
  }
  Terms out;
  for (const auto& [a, b] : pairs) {
    const Terms ta = a->terms_over(l);
    const Terms tb = b->terms_over(l);
    for (const auto& [na, ca] : ta) {
      for (const auto& [nb, cb] : tb) {
        for (std::size_t i = 0; i < dim; ++i) k[i] = na[i] + nb[i];
        auto [it, inserted] = out.try_emplace(k, ca);
        if (inserted) {
          it->second *= cb;
        } else {
          it->second += ca * cb;
        }
      }
    }
  }
  return TrigPoly(dim, std::move(out), l);
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  a.require_same_dim(b);
  return TrigPoly::sum_of_products({{&a, &b}}, a.dim_);
}

bool operator==(const TrigPoly& a, const TrigPoly& b) {
  return a.dim_ == b.dim_ && a.q_ == b.q_ && a.terms_ == b.terms_;
}

TrigPoly TrigPoly::shifted(const IntVec& l) const {
  if (l.size() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "shift has wrong dimension");
  Terms out;
  for (const auto& [n, c] : terms_) {
    IntVec k = n;
    for (std::size_t i = 0; i < dim_; ++i) k[i] += l[i] * q_;
    out.emplace(std::move(k), c);
  }
  TrigPoly r(dim_);
  r.q_ = q_;
  r.terms_ = std::move(out);
  return r;
}

TrigPoly TrigPoly::compose_dilate(const IntMatrix& m) const {
  if (m.dim() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "matrix dimension differs from polynomial");
  Terms out;
  for (const auto& [n, c] : terms_) out.emplace(m.apply(n), c);
  return TrigPoly(dim_, std::move(out), q_);
}

TrigPoly TrigPoly::compose_inverse_dilate(const IntMatrix& m) const {
  if (m.dim() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "matrix dimension differs from polynomial");
  const long long det = determinant(m);
  if (det == 0) throw MaskError(ErrorKind::NotDilation, "singular matrix");
  IntMatrix adj = m.adjugate();
  if (det < 0) {
    std::vector<long long> a = adj.row_major();
    for (auto& x : a) x = -x;
    adj = IntMatrix(dim_, std::move(a));
  }
  Terms out;
  for (const auto& [n, c] : terms_) out.emplace(adj.apply(n), c);
  return TrigPoly(dim_, std::move(out), q_ * std::llabs(det));
}

Cyclotomic TrigPoly::eval(const RatVec& p) const {
  if (p.size() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "point has wrong dimension");
  Cyclotomic sum;
  const Rational inv_q = make_rational(1, q_);
  for (const auto& [n, c] : terms_) {
    Rational phase = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      if (n[i] != 0 && p[i] != 0) phase += make_rational(n[i]) * p[i];
    phase *= inv_q;
    if (phase.get_den() == 1) {
      sum += c;
    } else {
      sum += c * Cyclotomic::exp_2pi_i(phase);
    }
  }
  return sum;
}

Cyclotomic TrigPoly::normalized_derivative(const MultiIndex& alpha, const RatVec& p) const {
  if (alpha.size() != dim_ || p.size() != dim_) throw MaskError(ErrorKind::DimensionMismatch, "derivative arguments have wrong dimension");
  Cyclotomic sum;
  const Rational inv_q = make_rational(1, q_);
  RatVec freq(dim_);
  for (const auto& [n, c] : terms_) {
    Rational phase = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      freq[i] = make_rational(n[i]) * inv_q;
      phase += freq[i] * p[i];
    }
    const Rational w = monomial_value(freq, alpha);
    if (w == 0) continue;
    Cyclotomic term = c;
    term *= w;
    if (phase.get_den() != 1) term *= Cyclotomic::exp_2pi_i(phase);
    sum += term;
  }
  return sum;
}

TrigPoly TrigPoly::substitute_one(std::size_t j) const {
  if (q_ != 1) throw MaskError(ErrorKind::NonIntegerFrequencies, "substitution needs integer frequencies");
  if (j >= dim_) throw MaskError(ErrorKind::DimensionMismatch, "axis out of range");
  Terms out;
  for (const auto& [n, c] : terms_) {
    IntVec k = n;
    k[j] = 0;
    auto [it, inserted] = out.try_emplace(std::move(k), c);
    if (!inserted) it->second += c;
  }
  return TrigPoly(dim_, std::move(out));
}

TrigPoly TrigPoly::divide_one_minus_z(std::size_t j) const {
  if (q_ != 1) throw MaskError(ErrorKind::NonIntegerFrequencies, "division needs integer frequencies");
  if (j >= dim_) throw MaskError(ErrorKind::DimensionMismatch, "axis out of range");
  // Group by the remaining exponents; within a group, u_e = sum_{e' <= e} t_{e'}.
  std::map<IntVec, std::map<long long, Cyclotomic>> groups;
  for (const auto& [n, c] : terms_) {
    IntVec rest = n;
    rest[j] = 0;
    groups[rest].emplace(n[j], c);
  }
  Terms out;
  for (const auto& [rest, line] : groups) {
    Cyclotomic running;
    const long long lo = line.begin()->first;
    const long long hi = line.rbegin()->first;
    auto it = line.begin();
    for (long long e = lo; e < hi; ++e) {
      if (it != line.end() && it->first == e) {
        running += it->second;
        ++it;
      }
      if (!running.is_zero()) {
        IntVec k = rest;
        k[j] = e;
        out.emplace(std::move(k), running);
      }
    }
    running += line.rbegin()->second;
    if (!running.is_zero()) {
      throw MaskError(ErrorKind::NotDivisible, "polynomial is not divisible by 1 - z_" + std::to_string(j + 1));
    }
  }
  return TrigPoly(dim_, std::move(out));
}

RationalInterval TrigPoly::l1_norm(int precision_bits) const {
  RationalInterval sum{0, 0};
  for (const auto& [n, c] : terms_) sum += c.magnitude_interval(precision_bits);
  return sum;
}

std::string TrigPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [n, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    const bool rational = c.is_rational();
    s += rational ? c.to_string() : "(" + c.to_string() + ")";
    if (std::all_of(n.begin(), n.end(), [](long long x) { return x == 0; })) continue;
    s += "*z^(";
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (i) s += ",";
      s += maskforge::to_string(make_rational(n[i], q_));
    }
    s += ")";
  }
  return s;
}

std::vector<TrigPoly> polyphase_split(const TrigPoly& t, const DilationContext& ctx) {
  if (!t.has_integer_frequencies()) throw MaskError(ErrorKind::NonIntegerFrequencies, "polyphase split needs integer frequencies");
  if (t.dim() != ctx.dim()) throw MaskError(ErrorKind::DimensionMismatch, "mask dimension differs from dilation");
  std::vector<TrigPoly::Terms> parts(ctx.m());
  for (const auto& [n, c] : t.terms()) {
    const std::size_t nu = ctx.coset_index(n);
    parts[nu].emplace(ctx.coset_offset(n), c);
  }
  std::vector<TrigPoly> taus;
  taus.reserve(parts.size());
  for (auto& p : parts) taus.emplace_back(t.dim(), std::move(p));
  return taus;
}

TrigPoly polyphase_assemble(const std::vector<TrigPoly>& taus, const DilationContext& ctx) {
  if (taus.size() != ctx.m()) {
    throw MaskError(ErrorKind::WrongCount,
                    "expected " + std::to_string(ctx.m()) + " polyphase components, got " + std::to_string(taus.size()));
  }
  TrigPoly t(ctx.dim());
  for (std::size_t nu = 0; nu < taus.size(); ++nu) {
    if (!taus[nu].has_integer_frequencies()) throw MaskError(ErrorKind::NonIntegerFrequencies, "polyphase component has fractional frequencies");
    t += taus[nu].compose_dilate(ctx.matrix()).shifted(ctx.digits()[nu]);
  }
  return t;
}

TrigPoly c_poly(std::size_t dim, std::size_t j) {
  IntVec e(dim, 0);
  e.at(j) = 1;
  return TrigPoly::one_minus(dim, e);
}

TrigPoly delta_poly(const IntMatrix& m, std::size_t j) { return TrigPoly::one_minus(m.dim(), m.column(j)); }

}  // namespace maskforge
